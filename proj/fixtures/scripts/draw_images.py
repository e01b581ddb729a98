#!/usr/bin/env python3
"""Draws the pre-rendered screenshots and issue images of the fixture corpus."""
from pathlib import Path

from PIL import Image, ImageDraw

ROOT = Path(__file__).resolve().parent.parent
W, H = 320, 200


def canvas(background="#ffffff"):
    img = Image.new("RGB", (W, H), background)
    return img, ImageDraw.Draw(img)


def save(img, *parts):
    path = ROOT.joinpath(*parts)
    path.parent.mkdir(parents=True, exist_ok=True)
    img.save(path, optimize=False)


def bar_chart(first, last):
    data = [5, 3, 8, 2, 6]
    gap = 8
    img, d = canvas()
    top = max(data)
    bar_w = (W - gap * (len(data) + 1)) / len(data)
    for i in range(first, last):
        h = data[i] * (H - gap) / top
        x = gap + i * (bar_w + gap)
        d.rectangle([round(x), round(H - h), round(x + bar_w) - 1, H - 1], fill="#3b82f6")
    return img


def dialog(title, close_button):
    img, d = canvas()
    d.rectangle([24, 24, 295, 151], fill="#ffffff", outline="#cbd5e1")
    d.rectangle([25, 25, 294, 60], fill="#e2e8f0")
    if title:
        d.rectangle([33, 36, 120, 49], fill="#0f172a")
    if close_button:
        d.rectangle([270, 34, 286, 51], fill="#f8fafc", outline="#64748b")
        d.line([274, 38, 282, 47], fill="#0f172a", width=2)
        d.line([282, 38, 274, 47], fill="#0f172a", width=2)
    d.rectangle([33, 72, 220, 83], fill="#334155")
    d.rectangle([250, 116, 286, 140], fill="#f1f5f9", outline="#64748b")
    d.rectangle([259, 124, 277, 132], fill="#0f172a")
    return img


def code_block(keyword_color):
    theme = {"background": "#1e1e1e", "text": "#d4d4d4", "number": "#b5cea8"}
    img, d = canvas(theme["background"])
    tokens = [("kw", 2), ("text", 8), ("kw", 6), ("num", 2), ("text", 3)]
    x, y = 8, 16
    for kind, chars in tokens:
        color = {"kw": keyword_color, "num": theme["number"], "text": theme["text"]}[kind]
        w = chars * 8
        d.rectangle([x, y, x + w - 3, y + 12], fill=color)
        x += w + 8
    return img


def main():
    save(bar_chart(1, 5), "tinychart", "renders", "bug.png")
    save(bar_chart(0, 5), "tinychart", "renders", "fixed.png")
    save(bar_chart(0, 4), "tinychart", "renders", "shifted.png")
    save(bar_chart(1, 5), "tinychart", "images", "reported.png")

    save(dialog(False, False), "tinydialog", "renders", "bug.png")
    save(dialog(True, False), "tinydialog", "renders", "fixed.png")
    save(dialog(True, True), "tinydialog", "renders", "closebutton.png")
    save(dialog(False, False), "tinydialog", "images", "reported.png")

    save(code_block("#1e1e1e"), "tinyprism", "renders", "bug.png")
    save(code_block("#569cd6"), "tinyprism", "renders", "fixed.png")
    save(code_block("#d4d4d4"), "tinyprism", "renders", "plain.png")


if __name__ == "__main__":
    main()
