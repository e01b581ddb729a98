// Light color theme.
const LIGHT_THEME = {
  background: '#ffffff',
  text: '#24292e',
  keyword: '#d73a49',
  string: '#032f62',
  comment: '#6a737d',
  number: '#005cc5',
};

TinyPrism.themes.light = LIGHT_THEME;
