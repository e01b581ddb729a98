// Public entry point.
TinyChart.version = '0.3.1';

TinyChart.create = function (kind, root, options) {
  if (kind === 'bar') return new TinyChart.BarChart(root, options);
  if (kind === 'line') return new TinyChart.LineChart(root, options);
  throw new Error('unknown chart kind: ' + kind);
};
