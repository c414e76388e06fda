/**
 * Browser entry point: wires the control state machine, the time readout,
 * the thumbnail strip, and the submit flow onto the page.
 */

import { ServiceClient, ApiError, type VideoMeta } from './api.js';
import { formatTimeDisplay } from './format.js';
import { HtmlMedia } from './media.js';
import { PlayerCore, type ControlAction } from './player.js';
import { renderStrip } from './strip.js';
import { planThumbnails } from './thumbnails.js';

const CONTROL_BUTTONS: Array<{ action: ControlAction; label: string }> = [
  { action: 'play', label: 'Play' },
  { action: 'pause', label: 'Pause' },
  { action: 'stop', label: 'Stop' },
  { action: 'rew', label: 'Rewind' },
  { action: 'fast', label: 'Forward' },
  { action: 'replay', label: 'Go Back 30 s' },
];

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

async function pickVideo(client: ServiceClient): Promise<VideoMeta> {
  const requested = new URLSearchParams(window.location.search).get('video');
  if (requested) {
    return client.getVideo(requested);
  }
  const videos = await client.listVideos();
  const first = videos[0];
  if (!first) {
    throw new ApiError(0, 'no_videos', 'no videos registered; add one with the CLI first');
  }
  return first;
}

function buildPage(root: HTMLElement, client: ServiceClient, meta: VideoMeta): void {
  root.replaceChildren();

  const title = el('h1', 'video-title', meta.title);
  const video = el('video', 'main-video');
  video.preload = 'auto';
  if (meta.source_url) {
    video.src = meta.source_url;
  }

  const readout = el('span', 'time-readout');
  const controls = el('div', 'controls');
  const banner = el('div', 'banner hidden');
  const strip = el('div', 'thumb-strip');
  const authorLabel = el('label', 'author-field', 'Name: ');
  const authorInput = el('input');
  authorInput.value = 'guest';
  authorLabel.append(authorInput);

  const media = new HtmlMedia(video);
  const durationS = () => (media.duration() > 0 ? media.duration() : meta.duration_s);

  const buttons = new Map<ControlAction, HTMLButtonElement>();
  const player: PlayerCore = new PlayerCore(media, undefined, undefined, () => render());

  for (const { action, label } of CONTROL_BUTTONS) {
    const button = el('button', 'control', label);
    button.addEventListener('click', () => player.press(action));
    buttons.set(action, button);
    controls.append(button);
  }

  const submitButton = el('button', 'control submit', 'Submit and Exit');
  controls.append(submitButton);
  controls.append(readout);

  const showBanner = (text: string, kind: 'error' | 'ok') => {
    banner.textContent = text;
    banner.className = `banner ${kind}`;
  };

  submitButton.addEventListener('click', async () => {
    submitButton.disabled = true;
    try {
      await player.submit(async (content) => {
        await client.postSession(meta.video_id, authorInput.value.trim() || 'guest', content);
      });
      showBanner('Session submitted — thank you. You can close the page now.', 'ok');
    } catch (failure) {
      submitButton.disabled = false;
      const reason = failure instanceof ApiError ? failure.message : String(failure);
      showBanner(`Submit failed (${reason}). Your events are kept — press Submit again to retry.`, 'error');
    }
  });

  const render = () => {
    readout.textContent = formatTimeDisplay(media.currentTime(), durationS());
    const rewind = buttons.get('rew');
    if (rewind) rewind.textContent = player.rewindLabel();
    const forward = buttons.get('fast');
    if (forward) forward.textContent = player.forwardLabel();
    if (player.submitted) {
      for (const button of buttons.values()) button.disabled = true;
      submitButton.disabled = true;
    }
  };

  video.addEventListener('timeupdate', render);
  video.addEventListener('loadedmetadata', render);

  window.addEventListener('beforeunload', (event) => {
    if (!player.submitted) {
      event.preventDefault();
      event.returnValue = '';
    }
  });

  root.append(title, video, controls, banner, authorLabel, strip);
  render();
  void renderThumbnails(client, meta, strip, player, durationS);
}

async function renderThumbnails(
  client: ServiceClient,
  meta: VideoMeta,
  strip: HTMLElement,
  player: PlayerCore,
  durationS: () => number,
): Promise<void> {
  try {
    const points = await client.getIndexPoints(meta.video_id);
    renderStrip(strip, planThumbnails(points, durationS()), meta, player);
  } catch {
    strip.classList.add('hidden');
  }
}

async function start(): Promise<void> {
  const root = document.getElementById('app');
  if (!root) {
    return;
  }
  const client = new ServiceClient('');
  try {
    const meta = await pickVideo(client);
    buildPage(root, client, meta);
  } catch (failure) {
    const reason = failure instanceof ApiError ? failure.message : String(failure);
    root.replaceChildren(el('div', 'banner error', `Cannot load a video: ${reason}`));
  }
}

void start();
