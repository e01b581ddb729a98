// JavaScript grammar.
const JAVASCRIPT = [
  { type: 'comment', pattern: /^\/\/[^\n]*/ },
  { type: 'string', pattern: /^'(?:[^'\\]|\\.)*'/ },
  { type: 'keyword', pattern: /^(?:if|else|return|function|const|let|var|for|while)\b/ },
  { type: 'number', pattern: /^\d+(?:\.\d+)?/ },
  { type: 'text', pattern: /^\w+/ },
];

TinyPrism.languages.javascript = JAVASCRIPT;
