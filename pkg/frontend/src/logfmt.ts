/**
 * Compact interaction-log text format shared with the indexing service.
 *
 * A log is a single line of space-separated `action:seconds` tokens, e.g.
 * `play:0.08 fast:9.567 replay:130.728 exit:200`. Seconds are non-negative
 * decimals with an optional fractional part; no sign, no exponent.
 */

export type Action = 'play' | 'pause' | 'stop' | 'rew' | 'fast' | 'replay' | 'exit';

export const ACTIONS: readonly Action[] = ['play', 'pause', 'stop', 'rew', 'fast', 'replay', 'exit'];

const ACTION_SET: ReadonlySet<string> = new Set(ACTIONS);

export interface LoggedEvent {
  action: Action;
  t: number;
}

/** Raised when a log line cannot be parsed; `tokenIndex` locates the bad token. */
export class LogSyntaxError extends Error {
  constructor(message: string, readonly tokenIndex: number) {
    super(message);
    this.name = 'LogSyntaxError';
  }
}

const SECONDS_PATTERN = /^\d+(\.\d+)?$/;

/**
 * Renders seconds in the canonical wire form: whole numbers without a
 * decimal point, everything else as the shortest decimal that round-trips,
 * never in scientific notation.
 */
export function formatSeconds(t: number): string {
  if (!Number.isFinite(t) || t < 0) {
    throw new RangeError(`seconds must be finite and non-negative, got ${t}`);
  }
  const text = String(t);
  if (!text.includes('e') && !text.includes('E')) {
    return text;
  }
  return expandExponent(text);
}

/** Expands a `String(number)` exponent form like `1.5e+21` to plain decimal digits. */
function expandExponent(text: string): string {
  const match = /^(\d+)(?:\.(\d+))?e([+-])(\d+)$/.exec(text);
  if (!match) {
    throw new RangeError(`cannot render ${text} as plain decimal`);
  }
  const [, intPart = '', fracPart = '', sign, expDigits = '0'] = match;
  const exponent = Number(expDigits);
  const digits = intPart + fracPart;
  if (sign === '+') {
    const pointAt = intPart.length + exponent;
    if (pointAt >= digits.length) {
      return digits + '0'.repeat(pointAt - digits.length);
    }
    return `${digits.slice(0, pointAt)}.${digits.slice(pointAt)}`;
  }
  const pointAt = intPart.length - exponent;
  if (pointAt > 0) {
    return `${digits.slice(0, pointAt)}.${digits.slice(pointAt)}`;
  }
  return trimTrailingZeros(`0.${'0'.repeat(-pointAt)}${digits}`);
}

function trimTrailingZeros(decimal: string): string {
  return decimal.includes('.') ? decimal.replace(/0+$/, '').replace(/\.$/, '') : decimal;
}

/** Serializes events to one canonical log line (empty string for no events). */
export function serializeLog(events: readonly LoggedEvent[]): string {
  return events.map((event) => `${event.action}:${formatSeconds(event.t)}`).join(' ');
}

/**
 * Parses a log line back into events. The grammar is strict: tokens are
 * separated by exactly one space, and each must be `action:seconds`.
 */
export function parseLog(text: string): LoggedEvent[] {
  if (text === '') {
    return [];
  }
  const tokens = text.split(' ');
  return tokens.map((token, index) => {
    const colonAt = token.indexOf(':');
    if (colonAt < 0) {
      throw new LogSyntaxError(`token ${index} (${JSON.stringify(token)}) has no ':'`, index);
    }
    const action = token.slice(0, colonAt);
    const seconds = token.slice(colonAt + 1);
    if (!ACTION_SET.has(action)) {
      throw new LogSyntaxError(`token ${index}: unknown action ${JSON.stringify(action)}`, index);
    }
    if (!SECONDS_PATTERN.test(seconds)) {
      throw new LogSyntaxError(`token ${index}: bad seconds ${JSON.stringify(seconds)}`, index);
    }
    return { action: action as Action, t: Number(seconds) };
  });
}
