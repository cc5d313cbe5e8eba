/**
 * Minimal deterministic SVG writer.
 *
 * Output depends only on the drawing calls: fixed number formatting, no
 * timestamps, no generated ids.  Rendering the same trajectory twice must
 * produce byte-identical files, so figures can be diffed and cached.
 */

/** Format a pixel quantity with two decimals, trimming trailing zeros. */
export function fmt(value: number): string {
  let s = value.toFixed(2);
  if (s.includes(".")) {
    s = s.replace(/\.?0+$/, "");
  }
  if (s === "-0") {
    s = "0";
  }
  return s;
}

/** Format an attribute quantity with four decimals, trimming trailing zeros. */
export function fmtAttr(value: number): string {
  let s = value.toFixed(4);
  if (s.includes(".")) {
    s = s.replace(/\.?0+$/, "");
  }
  return s === "-0" ? "0" : s;
}

export type Attrs = Record<string, string | number>;

function renderAttrs(attrs: Attrs): string {
  let out = "";
  for (const [key, value] of Object.entries(attrs)) {
    const text = typeof value === "number" ? fmtAttr(value) : value;
    out += ` ${key}="${escapeAttr(text)}"`;
  }
  return out;
}

function escapeAttr(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/"/g, "&quot;");
}

function escapeText(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export class SvgBuilder {
  readonly width: number;
  readonly height: number;
  private readonly parts: string[] = [];

  constructor(width: number, height: number) {
    this.width = width;
    this.height = height;
  }

  comment(text: string): void {
    this.parts.push(`<!-- ${text.replace(/--/g, "- -")} -->`);
  }

  rect(x: number, y: number, w: number, h: number, attrs: Attrs = {}): void {
    this.parts.push(
      `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" height="${fmt(h)}"` +
        `${renderAttrs(attrs)}/>`,
    );
  }

  circle(cx: number, cy: number, r: number, attrs: Attrs = {}): void {
    this.parts.push(
      `<circle cx="${fmt(cx)}" cy="${fmt(cy)}" r="${fmt(r)}"${renderAttrs(attrs)}/>`,
    );
  }

  line(x1: number, y1: number, x2: number, y2: number, attrs: Attrs = {}): void {
    this.parts.push(
      `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}"` +
        `${renderAttrs(attrs)}/>`,
    );
  }

  polyline(points: Array<[number, number]>, attrs: Attrs = {}): void {
    const pts = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
    this.parts.push(`<polyline points="${pts}"${renderAttrs(attrs)}/>`);
  }

  text(x: number, y: number, content: string, attrs: Attrs = {}): void {
    this.parts.push(
      `<text x="${fmt(x)}" y="${fmt(y)}"${renderAttrs(attrs)}>` +
        `${escapeText(content)}</text>`,
    );
  }

  toString(): string {
    const head =
      `<svg xmlns="http://www.w3.org/2000/svg" width="${this.width}" ` +
      `height="${this.height}" viewBox="0 0 ${this.width} ${this.height}">`;
    const background = `<rect width="${this.width}" height="${this.height}" fill="#ffffff"/>`;
    return [head, background, ...this.parts, "</svg>", ""].join("\n");
  }
}

export interface Viewport {
  xMin: number;
  xMax: number;
  yMin: number;
  yMax: number;
}

/** Grow a viewport so it fills a pixel rectangle without distorting angles. */
export function equalAspect(view: Viewport, pixelWidth: number, pixelHeight: number): Viewport {
  const dataW = view.xMax - view.xMin;
  const dataH = view.yMax - view.yMin;
  const scaleX = dataW / pixelWidth;
  const scaleY = dataH / pixelHeight;
  const scale = Math.max(scaleX, scaleY);
  const cx = (view.xMin + view.xMax) / 2;
  const cy = (view.yMin + view.yMax) / 2;
  const halfW = (scale * pixelWidth) / 2;
  const halfH = (scale * pixelHeight) / 2;
  return { xMin: cx - halfW, xMax: cx + halfW, yMin: cy - halfH, yMax: cy + halfH };
}

/**
 * One plotting area inside the page: a pixel rectangle plus the data
 * viewport mapped onto it.  Data +y points up; pixels +y point down.
 */
export class Panel {
  private readonly svg: SvgBuilder;
  readonly px: number;
  readonly py: number;
  readonly pw: number;
  readonly ph: number;
  readonly view: Viewport;

  constructor(svg: SvgBuilder, px: number, py: number, pw: number, ph: number, view: Viewport) {
    this.svg = svg;
    this.px = px;
    this.py = py;
    this.pw = pw;
    this.ph = ph;
    this.view = view;
  }

  toPixel(x: number, y: number): [number, number] {
    const u = (x - this.view.xMin) / (this.view.xMax - this.view.xMin);
    const v = (y - this.view.yMin) / (this.view.yMax - this.view.yMin);
    return [this.px + u * this.pw, this.py + (1 - v) * this.ph];
  }

  frame(attrs: Attrs = {}): void {
    this.svg.rect(this.px, this.py, this.pw, this.ph, {
      fill: "none",
      stroke: "#888888",
      "stroke-width": 1,
      ...attrs,
    });
  }

  label(content: string): void {
    this.svg.text(this.px + this.pw / 2, this.py - 6, content, {
      "font-family": "sans-serif",
      "font-size": 12,
      "text-anchor": "middle",
      fill: "#333333",
    });
  }

  dot(x: number, y: number, radiusPx: number, attrs: Attrs): void {
    const [cx, cy] = this.toPixel(x, y);
    this.svg.circle(cx, cy, radiusPx, attrs);
  }

  /** Circle whose radius is given in data units (assumes equal aspect). */
  dataCircle(x: number, y: number, radiusData: number, attrs: Attrs): void {
    const [cx, cy] = this.toPixel(x, y);
    const radiusPx = (radiusData * this.pw) / (this.view.xMax - this.view.xMin);
    this.svg.circle(cx, cy, radiusPx, attrs);
  }

  /**
   * Arrow anchored at data point (x, y) pointing along data direction
   * (dx, dy), drawn with a fixed pixel length.  Degenerate directions fall
   * back to a dot so silhouette-grazing sphere arrows stay visible.
   */
  arrow(x: number, y: number, dx: number, dy: number, lengthPx: number, attrs: Attrs): void {
    const [ax, ay] = this.toPixel(x, y);
    const scaleX = this.pw / (this.view.xMax - this.view.xMin);
    const scaleY = this.ph / (this.view.yMax - this.view.yMin);
    let vx = dx * scaleX;
    let vy = -dy * scaleY;
    const norm = Math.hypot(vx, vy);
    if (norm < 1e-12 || lengthPx < 1e-6) {
      this.dot(x, y, 1.5, { fill: String(attrs["stroke"] ?? "#333333"), ...opacityOf(attrs) });
      return;
    }
    vx /= norm;
    vy /= norm;
    const tipX = ax + vx * lengthPx;
    const tipY = ay + vy * lengthPx;
    const headLen = Math.max(3, lengthPx * 0.35);
    const headAngle = Math.PI / 7;
    const baseAngle = Math.atan2(vy, vx);
    const leftX = tipX - headLen * Math.cos(baseAngle - headAngle);
    const leftY = tipY - headLen * Math.sin(baseAngle - headAngle);
    const rightX = tipX - headLen * Math.cos(baseAngle + headAngle);
    const rightY = tipY - headLen * Math.sin(baseAngle + headAngle);
    this.svg.line(ax, ay, tipX, tipY, attrs);
    this.svg.polyline(
      [
        [leftX, leftY],
        [tipX, tipY],
        [rightX, rightY],
      ],
      { fill: "none", ...attrs },
    );
  }
}

function opacityOf(attrs: Attrs): Attrs {
  const out: Attrs = {};
  const op = attrs["stroke-opacity"] ?? attrs["opacity"];
  if (op !== undefined) {
    out["fill-opacity"] = op;
  }
  return out;
}
