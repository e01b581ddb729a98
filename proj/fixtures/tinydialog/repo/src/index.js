// Public entry point.
TinyUI.version = '1.4.0';
