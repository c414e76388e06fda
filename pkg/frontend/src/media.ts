/**
 * Thin seam between the player logic and the actual `<video>` element so the
 * control semantics can run (and be tested) without a DOM.
 */

export interface MediaFacade {
  /** Current playhead position in seconds. */
  currentTime(): number;
  /** Total media length in seconds. */
  duration(): number;
  isPaused(): boolean;
  isMuted(): boolean;
  play(): void;
  pause(): void;
  seek(t: number): void;
  setMuted(muted: boolean): void;
}

/** Adapter over a real HTMLMediaElement. */
export class HtmlMedia implements MediaFacade {
  constructor(private readonly element: HTMLMediaElement) {}

  currentTime(): number {
    return this.element.currentTime;
  }

  duration(): number {
    const d = this.element.duration;
    return Number.isFinite(d) ? d : 0;
  }

  isPaused(): boolean {
    return this.element.paused;
  }

  isMuted(): boolean {
    return this.element.muted;
  }

  play(): void {
    void this.element.play()?.catch(() => {
      /* autoplay restrictions surface through the paused state */
    });
  }

  pause(): void {
    this.element.pause();
  }

  seek(t: number): void {
    this.element.currentTime = t;
  }

  setMuted(muted: boolean): void {
    this.element.muted = muted;
  }
}

/** In-memory media with a manually advanced clock, for tests. */
export class FakeMedia implements MediaFacade {
  private t = 0;
  private paused = true;
  private muted = false;

  constructor(private readonly durationS: number) {}

  currentTime(): number {
    return this.t;
  }

  duration(): number {
    return this.durationS;
  }

  isPaused(): boolean {
    return this.paused;
  }

  isMuted(): boolean {
    return this.muted;
  }

  play(): void {
    this.paused = false;
  }

  pause(): void {
    this.paused = true;
  }

  seek(t: number): void {
    this.t = Math.min(Math.max(t, 0), this.durationS);
  }

  setMuted(muted: boolean): void {
    this.muted = muted;
  }

  /** Advances the playhead as if `seconds` of playback elapsed. */
  advance(seconds: number): void {
    if (!this.paused) {
      this.t = Math.min(this.t + seconds, this.durationS);
    }
  }
}
