/** Deterministic SVG assembly: fixed attribute order, fixed coordinate
 * precision, no timestamps or generated ids beyond the one clip path. */

export type Attrs = Record<string, string | number>;

/** Coordinates at 1/100 px; trailing zeros dropped so output is stable. */
export function num(value: number): string {
  let text = value.toFixed(2);
  if (text.includes(".")) {
    text = text.replace(/0+$/, "").replace(/\.$/, "");
  }
  return text === "-0" ? "0" : text;
}

export function el(tag: string, attrs: Attrs, children: string[] = []): string {
  const parts = Object.entries(attrs).map(
    ([name, value]) => `${name}="${typeof value === "number" ? num(value) : value}"`,
  );
  const open = parts.length > 0 ? `<${tag} ${parts.join(" ")}` : `<${tag}`;
  if (children.length === 0) {
    return `${open}/>`;
  }
  return `${open}>${children.join("")}</${tag}>`;
}

export function text(x: number, y: number, content: string, attrs: Attrs = {}): string {
  return el("text", { x: num(x), y: num(y), ...attrs }, [escapeText(content)]);
}

export function escapeText(content: string): string {
  return content.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function pathFrom(points: [number, number][]): string {
  return points
    .map(([x, y], i) => `${i === 0 ? "M" : "L"}${num(x)} ${num(y)}`)
    .join("");
}

export function polyline(points: [number, number][], attrs: Attrs): string {
  return el("path", { d: pathFrom(points), fill: "none", ...attrs });
}

export function dots(points: [number, number][], radius: number, attrs: Attrs): string {
  const circles = points.map(([x, y]) =>
    el("circle", { cx: num(x), cy: num(y), r: num(radius) }),
  );
  return el("g", attrs, circles);
}
