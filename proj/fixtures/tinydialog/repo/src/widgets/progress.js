// Horizontal progress bar.
class ProgressBar {
  constructor(root, options) {
    this.root = root;
    this.value = Math.max(0, Math.min(100, (options && options.value) || 0));
  }

  render() {
    injectStyles(document);
    const track = el('div', 'tui-progress');
    const fill = el('div', 'tui-progress-fill');
    fill.style.width = this.value + '%';
    track.appendChild(fill);
    this.root.appendChild(track);
  }
}

TinyUI.ProgressBar = ProgressBar;
