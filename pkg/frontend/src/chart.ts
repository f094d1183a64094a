// Spectrum chart: counts per channel (or energy) as an SVG bar chart with
// a linear/log toggle. Pure string builder so it is testable without a DOM.

export interface ChannelPoint {
  index: number;
  energy_keV: number | null;
  counts: number;
}

export interface ChartOptions {
  width?: number;
  height?: number;
  logScale?: boolean;
  useEnergy?: boolean;
}

const MARGIN = { top: 10, right: 10, bottom: 24, left: 46 };

function yValue(counts: number, logScale: boolean): number {
  if (!logScale) return counts;
  return Math.log10(Math.max(counts, 0.5));
}

export function spectrumChart(channels: ChannelPoint[], options: ChartOptions = {}): string {
  const width = options.width ?? 640;
  const height = options.height ?? 280;
  const logScale = options.logScale ?? false;
  const useEnergy = (options.useEnergy ?? false) &&
    channels.every((c) => c.energy_keV !== null);

  const plotW = width - MARGIN.left - MARGIN.right;
  const plotH = height - MARGIN.top - MARGIN.bottom;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${width} ${height}" ` +
      `class="spectrum-chart" data-scale="${logScale ? "log" : "linear"}">`,
  );
  parts.push(
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${plotW}" height="${plotH}" ` +
      `fill="none" stroke="#999"/>`,
  );

  if (channels.length) {
    const ys = channels.map((c) => yValue(c.counts, logScale));
    const yMax = Math.max(...ys, logScale ? 1 : 1);
    const yMin = logScale ? Math.min(...ys, 0) : 0;
    const span = yMax - yMin || 1;
    const barW = plotW / channels.length;
    channels.forEach((channel, i) => {
      const value = (yValue(channel.counts, logScale) - yMin) / span;
      const barH = Math.max(value * plotH, 0);
      const x = MARGIN.left + i * barW;
      const y = MARGIN.top + plotH - barH;
      const label = useEnergy ? `${channel.energy_keV} keV` : `ch ${channel.index}`;
      parts.push(
        `<rect class="bar" x="${x.toFixed(2)}" y="${y.toFixed(2)}" ` +
          `width="${Math.max(barW - 0.5, 0.5).toFixed(2)}" height="${barH.toFixed(2)}" ` +
          `fill="#38688c"><title>${label}: ${channel.counts}</title></rect>`,
      );
    });
    const axisLabel = useEnergy ? "energy, keV" : "channel";
    parts.push(
      `<text x="${MARGIN.left + plotW / 2}" y="${height - 6}" text-anchor="middle" ` +
        `font-size="11">${axisLabel}</text>`,
    );
    parts.push(
      `<text x="12" y="${MARGIN.top + plotH / 2}" text-anchor="middle" font-size="11" ` +
        `transform="rotate(-90 12 ${MARGIN.top + plotH / 2})">` +
        `${logScale ? "log10 counts" : "counts"}</text>`,
    );
  }
  parts.push("</svg>");
  return parts.join("");
}
