// Canvas helpers.
function createCanvas(root, width, height) {
  const canvas = document.createElement('canvas');
  canvas.width = width;
  canvas.height = height;
  root.appendChild(canvas);
  return canvas;
}

function clearCanvas(ctx, width, height, background) {
  ctx.fillStyle = background;
  ctx.fillRect(0, 0, width, height);
}

TinyChart.createCanvas = createCanvas;
TinyChart.clearCanvas = clearCanvas;
