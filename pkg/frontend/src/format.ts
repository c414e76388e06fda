/** Clock rendering for the player's time readout. */

function pad2(n: number): string {
  return n < 10 ? `0${n}` : String(n);
}

/** Renders whole seconds as MM:SS (minutes grow past 99 unpadded). */
export function formatClock(seconds: number): string {
  const whole = Math.max(0, Math.floor(seconds));
  const minutes = Math.floor(whole / 60);
  return `${pad2(minutes)}:${pad2(whole % 60)}`;
}

/** The `<current>/<total>` readout shown next to the controls. */
export function formatTimeDisplay(currentS: number, totalS: number): string {
  return `${formatClock(currentS)}/${formatClock(totalS)}`;
}
