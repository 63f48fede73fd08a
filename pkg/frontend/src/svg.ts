/** Deterministic SVG assembly: plain strings, no renderer state, no randomness. */

/** Pixel coordinate: two decimals with trailing zeros trimmed, -0 normalized. */
export function px(value: number): string {
  let s = value.toFixed(2);
  if (s.includes(".")) {
    s = s.replace(/\.?0+$/, "");
  }
  return s === "-0" ? "0" : s;
}

/** Tick label: shortest decimal form after rounding to 6 significant digits.
Exact powers of ten far from 1 print as "1e7" to keep log axes readable. */
export function fmtNum(value: number): string {
  if (!Number.isFinite(value)) {
    return value > 0 ? "inf" : "-inf";
  }
  if (value !== 0) {
    const exp = Math.log10(Math.abs(value));
    if (Number.isInteger(exp) && Math.abs(exp) >= 5) {
      return `${value < 0 ? "-" : ""}1e${exp}`;
    }
  }
  return String(Number(value.toPrecision(6)));
}

export function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** One element; attribute order follows the given object, numbers go through px(). */
export function el(
  tag: string,
  attrs: Record<string, string | number>,
  children?: string | string[],
): string {
  let out = `<${tag}`;
  for (const [key, value] of Object.entries(attrs)) {
    out += ` ${key}="${typeof value === "number" ? px(value) : esc(value)}"`;
  }
  if (children === undefined) {
    return out + "/>";
  }
  const body = Array.isArray(children) ? children.join("") : children;
  return `${out}>${body}</${tag}>`;
}

export function textEl(
  x: number,
  y: number,
  content: string,
  attrs: Record<string, string | number> = {},
): string {
  return el("text", { x, y, ...attrs }, esc(content));
}

export function svgDocument(width: number, height: number, children: string[]): string {
  const body = [
    el("rect", { x: 0, y: 0, width, height, fill: "#ffffff" }),
    ...children,
  ];
  return (
    el(
      "svg",
      {
        xmlns: "http://www.w3.org/2000/svg",
        width,
        height,
        viewBox: `0 0 ${width} ${height}`,
        "font-family": "Helvetica, Arial, sans-serif",
        "font-size": 12,
      },
      body,
    ) + "\n"
  );
}
