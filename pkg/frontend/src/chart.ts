// Dependency-free SVG line charts for the dashboard and reveal views.

export interface Series {
  label: string;
  values: number[];
  color: string;
}

function scale(values: number[], lo: number, hi: number, outLo: number, outHi: number): number[] {
  const span = hi - lo || 1;
  return values.map((v) => outLo + ((v - lo) / span) * (outHi - outLo));
}

export function lineChart(series: Series[], width = 360, height = 140, title = ""): string {
  const all = series.flatMap((s) => s.values);
  if (all.length === 0) {
    return `<svg class="chart" width="${width}" height="${height}" role="img"></svg>`;
  }
  const lo = Math.min(0, ...all);
  const hi = Math.max(1, ...all);
  const pad = 6;
  const parts: string[] = [];
  const zeroY = scale([0], lo, hi, height - pad, pad)[0];
  parts.push(
    `<line x1="${pad}" y1="${zeroY.toFixed(1)}" x2="${width - pad}" y2="${zeroY.toFixed(1)}" stroke="#ccc"/>`,
  );
  for (const s of series) {
    const xs = scale(s.values.map((_, i) => i), 0, Math.max(1, s.values.length - 1), pad, width - pad);
    const ys = scale(s.values, lo, hi, height - pad, pad);
    const points = xs.map((x, i) => `${x.toFixed(1)},${ys[i].toFixed(1)}`).join(" ");
    parts.push(
      `<polyline data-series="${s.label}" data-n="${s.values.length}" fill="none" stroke="${s.color}" stroke-width="1.5" points="${points}"/>`,
    );
  }
  const legend = series
    .map((s, i) => `<text x="${pad + 90 * i}" y="12" fill="${s.color}" font-size="10">${s.label}</text>`)
    .join("");
  return (
    `<svg class="chart" width="${width}" height="${height}" role="img" aria-label="${title}">` +
    `${legend}${parts.join("")}</svg>`
  );
}
