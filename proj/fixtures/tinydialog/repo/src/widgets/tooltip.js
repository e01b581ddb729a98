// Tooltip shown next to an anchor element on hover.
class Tooltip {
  constructor(anchor, text) {
    this.anchor = anchor;
    this.text = text;
    this.node = null;
    anchor.addEventListener('mouseenter', () => this.show());
    anchor.addEventListener('mouseleave', () => this.hide());
  }

  show() {
    injectStyles(document);
    const rect = this.anchor.getBoundingClientRect();
    this.node = el('div', 'tui-tooltip', this.text);
    this.node.style.left = rect.left + 'px';
    this.node.style.top = rect.bottom + 4 + 'px';
    document.body.appendChild(this.node);
  }

  hide() {
    if (this.node) document.body.removeChild(this.node);
    this.node = null;
  }
}

TinyUI.Tooltip = Tooltip;
