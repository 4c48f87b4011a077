/**
 * SVG-to-PNG rasterization via the prebuilt resvg native binding.
 */

import { Resvg } from "@resvg/resvg-js";

/** Rasterize an SVG string at 2x the viewBox width for crisp text. */
export function svgToPng(svg: string): Buffer {
  const resvg = new Resvg(svg, {
    fitTo: { mode: "width", value: 1400 },
    background: "white",
  });
  return resvg.render().asPng();
}
