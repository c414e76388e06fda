/**
 * Plans the thumbnail strip: the most-replayed moments become real tiles,
 * and when the index has fewer points than the strip has slots, the gaps
 * are filled with evenly spaced padding tiles so the strip always shows a
 * full row. Padding tiles are visually distinguished from real ones.
 */

import type { IndexPoint } from './api.js';

export interface ThumbnailTile {
  /** Seek target in seconds. */
  t: number;
  /** True when the tile comes from the replay index rather than padding. */
  real: boolean;
}

/**
 * Picks up to `count` index points (best rank first) and pads the remainder
 * at duration×i/(padCount+1) for i = 1..padCount, floored to whole seconds.
 * Tiles come back in time order.
 */
export function planThumbnails(
  points: readonly IndexPoint[],
  durationS: number,
  count = 3,
): ThumbnailTile[] {
  const real: ThumbnailTile[] = [...points]
    .sort((a, b) => a.rank - b.rank)
    .slice(0, count)
    .map((p) => ({ t: p.t, real: true }));
  const padCount = count - real.length;
  const padding: ThumbnailTile[] = [];
  for (let i = 1; i <= padCount; i += 1) {
    padding.push({ t: Math.floor((durationS * i) / (padCount + 1)), real: false });
  }
  return [...real, ...padding].sort((a, b) => a.t - b.t);
}
