/**
 * DOM rendering for the thumbnail strip. Each tile shows a muted inline
 * preview: hovering plays the video from the tile's time, clicking seeks
 * the main player there and resumes playback.
 */

import type { VideoMeta } from './api.js';
import type { PlayerCore } from './player.js';
import type { ThumbnailTile } from './thumbnails.js';

export function renderStrip(
  strip: HTMLElement,
  tiles: readonly ThumbnailTile[],
  meta: VideoMeta,
  player: PlayerCore,
): void {
  strip.replaceChildren();
  for (const tile of tiles) {
    strip.append(buildTile(tile, meta, player));
  }
}

export function buildTile(tile: ThumbnailTile, meta: VideoMeta, player: PlayerCore): HTMLElement {
  const node = document.createElement('figure');
  node.className = tile.real ? 'thumb real' : 'thumb padded';

  const preview = document.createElement('video');
  preview.className = 'thumb-preview';
  preview.muted = true;
  preview.preload = 'metadata';
  if (meta.source_url) {
    preview.src = meta.source_url;
  }
  preview.addEventListener('loadedmetadata', () => {
    preview.currentTime = tile.t;
  });

  const caption = document.createElement('figcaption');
  caption.className = 'thumb-caption';
  caption.textContent = tile.real ? `replayed at ${tile.t}s` : `${tile.t}s`;
  node.append(preview, caption);

  node.addEventListener('mouseenter', () => {
    preview.currentTime = tile.t;
    void preview.play()?.catch(() => {
      /* preview playback is best-effort */
    });
  });
  node.addEventListener('mouseleave', () => {
    preview.pause();
    preview.currentTime = tile.t;
  });
  node.addEventListener('click', () => player.seekTo(tile.t));
  return node;
}
