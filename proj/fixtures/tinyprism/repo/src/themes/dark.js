// Dark color theme.
const DARK_THEME = {
  background: '#1e1e1e',
  text: '#d4d4d4',
  keyword: '#1e1e1e',
  string: '#ce9178',
  comment: '#6a9955',
  number: '#b5cea8',
};

TinyPrism.themes.dark = DARK_THEME;
