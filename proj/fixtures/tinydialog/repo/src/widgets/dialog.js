// Modal dialog with a header, a body and a row of buttons.
const DIALOG_DEFAULTS = {
  title: '',
  body: '',
  closable: true,
  buttons: ['OK'],
};

class Dialog {
  constructor(root, options) {
    this.root = root;
    this.options = Object.assign({}, DIALOG_DEFAULTS, options);
    this.box = null;
  }

  render() {
    injectStyles(document);
    if (this.box) this.root.removeChild(this.box);
    const box = el('div', 'tui-dialog');
    this.renderHeader(box);
    this.renderBody(box);
    this.renderFooter(box);
    this.root.appendChild(box);
    this.box = box;
  }

  renderHeader(box) {
    const header = el('div', 'tui-dialog-header');
    if (this.options.closable) {
      header.appendChild(el('span', 'tui-dialog-title', this.options.title));
      const close = el('button', 'tui-dialog-close', '×');
      close.setAttribute('aria-label', 'Close');
      close.addEventListener('click', () => this.close());
      header.appendChild(close);
    }
    box.appendChild(header);
  }

  renderBody(box) {
    box.appendChild(el('div', 'tui-dialog-body', this.options.body));
  }

  renderFooter(box) {
    const footer = el('div', 'tui-dialog-footer');
    for (const label of this.options.buttons) {
      const button = el('button', 'tui-dialog-button', label);
      button.addEventListener('click', () => this.close());
      footer.appendChild(button);
    }
    box.appendChild(footer);
  }

  close() {
    if (!this.box) return;
    this.root.removeChild(this.box);
    this.box = null;
  }
}

TinyUI.Dialog = Dialog;
