// Splits source text into typed tokens using a language's ordered pattern list.
function tokenize(code, grammar) {
  const tokens = [];
  let rest = code;
  while (rest.length > 0) {
    let matched = false;
    for (const rule of grammar) {
      const m = rule.pattern.exec(rest);
      if (m && m.index === 0 && m[0].length > 0) {
        tokens.push({ type: rule.type, text: m[0] });
        rest = rest.slice(m[0].length);
        matched = true;
        break;
      }
    }
    if (!matched) {
      tokens.push({ type: 'text', text: rest[0] });
      rest = rest.slice(1);
    }
  }
  return tokens;
}

TinyPrism.tokenize = tokenize;
