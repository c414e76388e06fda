/**
 * Client for the indexing service's HTTP API. Every non-2xx response
 * carries a JSON envelope `{status, code, message, detail}` which is
 * surfaced as an ApiError.
 */

export interface VideoMeta {
  video_id: string;
  title: string;
  duration_s: number;
  /** Locator of the playable media; empty string when none is registered. */
  source_url: string;
}

export interface IndexPoint {
  t: number;
  score: number;
  rank: number;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
    readonly detail: unknown = null,
  ) {
    super(message);
    this.name = 'ApiError';
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  let response: Response;
  try {
    response = await fetch(url, init);
  } catch (cause) {
    throw new ApiError(0, 'network_error', `cannot reach the service: ${String(cause)}`);
  }
  if (!response.ok) {
    let code = 'http_error';
    let message = `request failed with status ${response.status}`;
    let detail: unknown = null;
    try {
      const envelope = (await response.json()) as {
        code?: string;
        message?: string;
        detail?: unknown;
      };
      code = envelope.code ?? code;
      message = envelope.message ?? message;
      detail = envelope.detail ?? null;
    } catch {
      /* not a JSON envelope; keep the generic message */
    }
    throw new ApiError(response.status, code, message, detail);
  }
  return (await response.json()) as T;
}

export class ServiceClient {
  constructor(private readonly base = '') {}

  async listVideos(): Promise<VideoMeta[]> {
    const body = await request<{ videos: VideoMeta[] }>(`${this.base}/api/v1/videos`);
    return body.videos;
  }

  async getVideo(videoId: string): Promise<VideoMeta> {
    return request<VideoMeta>(`${this.base}/api/v1/videos/${encodeURIComponent(videoId)}`);
  }

  async getIndexPoints(
    videoId: string,
    options: { k?: number; minDistanceS?: number; profile?: string } = {},
  ): Promise<IndexPoint[]> {
    const params = new URLSearchParams();
    if (options.k !== undefined) params.set('k', String(options.k));
    if (options.minDistanceS !== undefined) params.set('min_distance_s', String(options.minDistanceS));
    if (options.profile !== undefined) params.set('profile', options.profile);
    const query = params.size > 0 ? `?${params.toString()}` : '';
    const body = await request<{ points: IndexPoint[] }>(
      `${this.base}/api/v1/videos/${encodeURIComponent(videoId)}/index${query}`,
    );
    return body.points;
  }

  /** Posts a session as compact log text; resolves to the assigned session id. */
  async postSession(videoId: string, author: string, content: string): Promise<number> {
    const body = await request<{ session_id: number }>(
      `${this.base}/api/v1/videos/${encodeURIComponent(videoId)}/sessions`,
      {
        method: 'POST',
        headers: { 'Content-Type': 'application/json' },
        body: JSON.stringify({ author, content }),
      },
    );
    return body.session_id;
  }
}
