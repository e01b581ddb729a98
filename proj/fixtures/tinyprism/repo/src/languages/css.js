// CSS grammar.
const CSS = [
  { type: 'comment', pattern: /^\/\*[\s\S]*?\*\// },
  { type: 'keyword', pattern: /^@[\w-]+/ },
  { type: 'string', pattern: /^"[^"]*"/ },
  { type: 'number', pattern: /^\d+(?:px|em|%)?/ },
];

TinyPrism.languages.css = CSS;
