// Writes highlighted tokens into a <pre> element.
function colorFor(theme, type) {
  return theme[type] || theme.text;
}

function highlight(root, code, options) {
  const grammar = TinyPrism.languages[options.language] || [];
  const theme = TinyPrism.themes[options.theme || 'light'];
  const pre = document.createElement('pre');
  pre.style.background = theme.background;
  pre.style.color = theme.text;
  pre.style.padding = '8px';
  for (const token of tokenize(code, grammar)) {
    const span = document.createElement('span');
    span.textContent = token.text;
    span.style.color = colorFor(theme, token.type);
    pre.appendChild(span);
  }
  root.appendChild(pre);
  return pre;
}

TinyPrism.highlight = highlight;
