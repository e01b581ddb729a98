// Optional gutter with one number per source line.
function addLineNumbers(pre) {
  const lines = pre.textContent.split('\n').length;
  const gutter = document.createElement('div');
  gutter.className = 'tp-gutter';
  for (let i = 1; i <= lines; i++) {
    const n = document.createElement('div');
    n.textContent = String(i);
    gutter.appendChild(n);
  }
  pre.parentNode.insertBefore(gutter, pre);
  return gutter;
}

TinyPrism.addLineNumbers = addLineNumbers;
