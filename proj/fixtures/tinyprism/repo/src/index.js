// Public entry point.
TinyPrism.version = '2.0.0';
