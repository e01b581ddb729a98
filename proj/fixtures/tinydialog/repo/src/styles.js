// Default stylesheet, injected once per document.
const STYLES = `
.tui-dialog { position: absolute; top: 24px; left: 24px; width: 272px; border: 1px solid #cbd5e1; background: #fff; }
.tui-dialog-header { display: flex; justify-content: space-between; padding: 8px; background: #e2e8f0; min-height: 20px; }
.tui-dialog-title { font-weight: bold; }
.tui-dialog-body { padding: 8px; }
.tui-dialog-footer { padding: 8px; text-align: right; }
.tui-progress { height: 12px; background: #e2e8f0; }
.tui-progress-fill { height: 100%; background: #22c55e; }
.tui-tooltip { position: absolute; padding: 4px 6px; background: #0f172a; color: #fff; }
`;

function injectStyles(doc) {
  if (doc.getElementById('tui-styles')) return;
  const style = doc.createElement('style');
  style.id = 'tui-styles';
  style.textContent = STYLES;
  doc.head.appendChild(style);
}

TinyUI.injectStyles = injectStyles;
