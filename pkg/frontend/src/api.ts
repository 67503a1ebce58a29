// Thin HTTP client for the game server. No game logic lives here.

import type { EventBatch, SeatState } from "./types.js";

export class ApiError extends Error {
  constructor(public status: number, detail: string) {
    super(detail);
  }
}

async function getJson<T>(url: string): Promise<T> {
  const res = await fetch(url);
  const body = await res.json().catch(() => ({}));
  if (!res.ok) throw new ApiError(res.status, (body as any).detail ?? res.statusText);
  return body as T;
}

export class GameClient {
  constructor(public baseUrl: string = "") {}

  joinUrl(token: string): string {
    return `${this.baseUrl}/v1/seats/${encodeURIComponent(token)}`;
  }

  stateUrl(session: string, token: string): string {
    return `${this.baseUrl}/v1/sessions/${encodeURIComponent(session)}/state?token=${encodeURIComponent(token)}`;
  }

  pollUrl(session: string, token: string, after: number): string {
    return (
      `${this.baseUrl}/v1/sessions/${encodeURIComponent(session)}/events/poll` +
      `?token=${encodeURIComponent(token)}&after=${after}`
    );
  }

  streamUrl(session: string, token: string, after: number): string {
    return (
      `${this.baseUrl}/v1/sessions/${encodeURIComponent(session)}/events` +
      `?token=${encodeURIComponent(token)}&after=${after}`
    );
  }

  join(token: string): Promise<SeatState> {
    return getJson<SeatState>(this.joinUrl(token));
  }

  state(session: string, token: string): Promise<SeatState> {
    return getJson<SeatState>(this.stateUrl(session, token));
  }

  pollEvents(session: string, token: string, after: number): Promise<EventBatch> {
    return getJson<EventBatch>(this.pollUrl(session, token, after));
  }

  async submitOrder(session: string, token: string, order: number): Promise<void> {
    const res = await fetch(`${this.baseUrl}/v1/sessions/${encodeURIComponent(session)}/orders`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ token, order }),
    });
    if (!res.ok) {
      const body = await res.json().catch(() => ({}));
      throw new ApiError(res.status, (body as any).detail ?? res.statusText);
    }
  }
}

// Server push with graceful degradation: browsers get an EventSource stream,
// everything else (and broken streams) falls back to polling.
export function subscribe(
  client: GameClient,
  session: string,
  token: string,
  onAdvance: () => void,
  pollMs = 500,
): () => void {
  let cursor = -1;
  let stopped = false;
  let timer: ReturnType<typeof setTimeout> | null = null;

  const poll = async () => {
    if (stopped) return;
    try {
      const batch = await client.pollEvents(session, token, cursor);
      if (batch.events.length > 0) {
        cursor = batch.events[batch.events.length - 1].seq;
        onAdvance();
      }
      if (batch.status === "finished") return;
    } catch {
      // transient errors: keep polling
    }
    timer = setTimeout(poll, pollMs);
  };

  if (typeof EventSource !== "undefined") {
    const source = new EventSource(client.streamUrl(session, token, cursor));
    source.onmessage = (msg) => {
      const event = JSON.parse(msg.data);
      cursor = event.seq;
      onAdvance();
      if (event.type === "finished") source.close();
    };
    source.onerror = () => {
      source.close();
      void poll();
    };
    return () => {
      stopped = true;
      source.close();
    };
  }

  void poll();
  return () => {
    stopped = true;
    if (timer) clearTimeout(timer);
  };
}
