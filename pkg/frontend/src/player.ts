/**
 * Control state machine for the logging video player.
 *
 * Every button press is stamped with the playhead time and buffered; the
 * buffer is posted as one compact log line when the viewer submits. Rewind
 * and Forward are scrub modes that step the playhead by `scrubStepS` every
 * `scrubTickS` seconds with the audio muted.
 */

import type { MediaFacade } from './media.js';
import { serializeLog, type Action, type LoggedEvent } from './logfmt.js';

export type Mode = 'idle' | 'playing' | 'paused' | 'rewinding' | 'forwarding';

/** Button presses; `exit` is appended automatically on submit, never pressed. */
export type ControlAction = Exclude<Action, 'exit'>;

export interface PlayerConfig {
  scrubStepS: number;
  scrubTickS: number;
  gobackWindowS: number;
  thumbnailCount: number;
}

export const DEFAULT_CONFIG: PlayerConfig = {
  scrubStepS: 3,
  scrubTickS: 0.5,
  gobackWindowS: 30,
  thumbnailCount: 3,
};

/** Drives scrub ticks; swapped for a manual one in tests. */
export interface TickTimer {
  start(everyMs: number, onTick: () => void): void;
  stop(): void;
}

export class IntervalTimer implements TickTimer {
  private handle: ReturnType<typeof setInterval> | null = null;

  start(everyMs: number, onTick: () => void): void {
    this.stop();
    this.handle = setInterval(onTick, everyMs);
  }

  stop(): void {
    if (this.handle !== null) {
      clearInterval(this.handle);
      this.handle = null;
    }
  }
}

/** Timer that never fires on its own; tests call `PlayerCore.tick()` directly. */
export class ManualTimer implements TickTimer {
  running = false;

  start(): void {
    this.running = true;
  }

  stop(): void {
    this.running = false;
  }
}

export class PlayerCore {
  private currentMode: Mode = 'idle';
  private readonly buffer: LoggedEvent[] = [];
  private submittedFlag = false;

  constructor(
    private readonly media: MediaFacade,
    readonly config: PlayerConfig = DEFAULT_CONFIG,
    private readonly timer: TickTimer = new IntervalTimer(),
    private readonly onChange: () => void = () => {},
  ) {}

  get mode(): Mode {
    return this.currentMode;
  }

  get submitted(): boolean {
    return this.submittedFlag;
  }

  /** Snapshot of the buffered presses, oldest first. */
  events(): readonly LoggedEvent[] {
    return [...this.buffer];
  }

  get isScrubbing(): boolean {
    return this.currentMode === 'rewinding' || this.currentMode === 'forwarding';
  }

  rewindLabel(): string {
    return this.currentMode === 'rewinding' ? 'Stop Rewind' : 'Rewind';
  }

  forwardLabel(): string {
    return this.currentMode === 'forwarding' ? 'Stop Forward' : 'Forward';
  }

  /**
   * Applies a control press: buffers `action` stamped with the playhead,
   * then runs the state transition. Returns false (and does nothing) once
   * the session has been submitted — controls are dead after that.
   */
  press(action: ControlAction): boolean {
    if (this.submittedFlag) {
      return false;
    }
    const t = this.media.currentTime();
    this.buffer.push({ action, t });
    switch (action) {
      case 'play':
        this.leaveScrub();
        this.currentMode = 'playing';
        this.media.play();
        break;
      case 'pause':
        this.leaveScrub();
        this.currentMode = 'paused';
        this.media.pause();
        break;
      case 'stop':
        this.leaveScrub();
        this.currentMode = 'idle';
        this.media.pause();
        this.media.seek(0);
        break;
      case 'rew':
        if (this.currentMode === 'rewinding') {
          this.endScrub('playing');
        } else {
          this.startScrub('rewinding');
        }
        break;
      case 'fast':
        if (this.currentMode === 'forwarding') {
          this.endScrub('playing');
        } else {
          this.startScrub('forwarding');
        }
        break;
      case 'replay':
        this.leaveScrub();
        this.media.seek(Math.max(t - this.config.gobackWindowS, 0));
        this.currentMode = 'playing';
        this.media.play();
        break;
    }
    this.onChange();
    return true;
  }

  /**
   * Thumbnail click: jumps the playhead and resumes playback without
   * logging a press — only button presses enter the session log.
   */
  seekTo(t: number): void {
    if (this.submittedFlag) {
      return;
    }
    this.leaveScrub();
    this.media.seek(t);
    this.currentMode = 'playing';
    this.media.play();
    this.onChange();
  }

  /**
   * One scrub step. Steps are computed from the live media clock, not an
   * accumulator, so timer jitter never drifts the playhead off-rate.
   */
  tick(): void {
    if (this.currentMode === 'rewinding') {
      const next = this.media.currentTime() - this.config.scrubStepS;
      if (next <= 0) {
        this.media.seek(0);
        this.endScrub('paused');
      } else {
        this.media.seek(next);
      }
    } else if (this.currentMode === 'forwarding') {
      const next = this.media.currentTime() + this.config.scrubStepS;
      const end = this.media.duration();
      if (next >= end) {
        this.media.seek(end);
        this.endScrub('paused');
      } else {
        this.media.seek(next);
      }
    }
    this.onChange();
  }

  /** The compact log line a submit would post right now: presses + trailing exit. */
  buildSubmission(): string {
    return serializeLog([...this.buffer, { action: 'exit', t: this.media.currentTime() }]);
  }

  /**
   * Posts the session. On success the buffer is cleared and all controls
   * are disabled; on failure the buffer is left intact so the viewer can
   * retry, and the error propagates to the caller.
   */
  async submit(post: (content: string) => Promise<void>): Promise<void> {
    if (this.submittedFlag) {
      throw new Error('session already submitted');
    }
    if (this.isScrubbing) {
      this.endScrub('paused');
    }
    const content = this.buildSubmission();
    await post(content);
    this.submittedFlag = true;
    this.buffer.length = 0;
    this.onChange();
  }

  private startScrub(mode: 'rewinding' | 'forwarding'): void {
    this.currentMode = mode;
    this.media.pause();
    this.media.setMuted(true);
    this.timer.start(this.config.scrubTickS * 1000, () => this.tick());
  }

  private endScrub(next: Mode): void {
    this.timer.stop();
    this.media.setMuted(false);
    this.currentMode = next;
    if (next === 'playing') {
      this.media.play();
    } else {
      this.media.pause();
    }
  }

  private leaveScrub(): void {
    if (this.isScrubbing) {
      this.timer.stop();
      this.media.setMuted(false);
    }
  }
}
