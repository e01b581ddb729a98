// Vertical bar chart.
const BAR_DEFAULTS = {
  width: 320,
  height: 200,
  gap: 8,
  color: '#3b82f6',
  background: '#ffffff',
};

class BarChart {
  constructor(root, options) {
    this.options = Object.assign({}, BAR_DEFAULTS, options);
    this.canvas = createCanvas(root, this.options.width, this.options.height);
  }

  render() {
    const ctx = this.canvas.getContext('2d');
    const { width, height, background } = this.options;
    clearCanvas(ctx, width, height, background);
    this.drawBars(ctx, this.options.data || []);
  }

  drawBars(ctx, values) {
    const { width, height, gap, color } = this.options;
    const scale = linearScale(maxOf(values), height - gap);
    const barWidth = (width - gap * (values.length + 1)) / Math.max(values.length, 1);
    ctx.fillStyle = color;
    for (let i = 1; i < values.length; i++) {
      const h = scale(values[i]);
      const x = gap + i * (barWidth + gap);
      ctx.fillRect(x, height - h, barWidth, h);
    }
  }
}

TinyChart.BarChart = BarChart;
