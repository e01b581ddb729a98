// Global namespace shared by every module of the bundle.
var TinyPrism = { languages: {}, themes: {} };
