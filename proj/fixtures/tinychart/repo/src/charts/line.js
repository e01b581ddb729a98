// Line chart through the data points.
const LINE_DEFAULTS = {
  width: 320,
  height: 200,
  padding: 10,
  color: '#ef4444',
  background: '#ffffff',
};

class LineChart {
  constructor(root, options) {
    this.options = Object.assign({}, LINE_DEFAULTS, options);
    this.canvas = createCanvas(root, this.options.width, this.options.height);
  }

  render() {
    const ctx = this.canvas.getContext('2d');
    const { width, height, background } = this.options;
    clearCanvas(ctx, width, height, background);
    this.drawLine(ctx, this.options.data || []);
  }

  drawLine(ctx, values) {
    const { width, height, padding, color } = this.options;
    const scale = linearScale(maxOf(values), height - 2 * padding);
    const step = values.length > 1 ? (width - 2 * padding) / (values.length - 1) : 0;
    ctx.strokeStyle = color;
    ctx.beginPath();
    values.forEach(function (v, i) {
      const x = padding + i * step;
      const y = height - padding - scale(v);
      if (i === 0) ctx.moveTo(x, y);
      else ctx.lineTo(x, y);
    });
    ctx.stroke();
  }
}

TinyChart.LineChart = LineChart;
