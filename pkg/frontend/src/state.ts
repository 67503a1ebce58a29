// Client-side store: a pure function of server payloads, no hidden channels.

import type { SeatState } from "./types.js";

export type Screen = "join" | "lobby" | "play" | "reveal" | "error";

export interface ClientState {
  screen: Screen;
  token: string;
  session: string;
  seat: SeatState | null;
  awaitingAdvance: boolean; // submitted, waiting for the period to move
  error: string | null;
}

export function initialState(): ClientState {
  return { screen: "join", token: "", session: "", seat: null, awaitingAdvance: false, error: null };
}

export function applySeatState(state: ClientState, seat: SeatState): ClientState {
  const screen: Screen =
    seat.status === "finished" ? "reveal" : seat.status === "lobby" ? "lobby" : "play";
  return {
    ...state,
    screen,
    session: seat.session,
    seat,
    awaitingAdvance: seat.status === "in_play" ? Boolean(seat.submitted) : false,
    error: null,
  };
}

export function applyError(state: ClientState, message: string): ClientState {
  // a failed join leaves no partial seat state behind
  if (state.seat === null) {
    return { ...initialState(), token: state.token, screen: "error", error: message };
  }
  return { ...state, error: message };
}

export function markSubmitted(state: ClientState): ClientState {
  return { ...state, awaitingAdvance: true, error: null };
}

/** Client-side order validation: non-negative integers only. */
export function parseOrder(raw: string): number | null {
  if (!/^\d+$/.test(raw.trim())) return null;
  const value = Number(raw.trim());
  return Number.isSafeInteger(value) && value >= 0 ? value : null;
}

/** The d+x hint shown next to the order box. */
export function impliedAdjustment(order: number, arrivingOrder: number): number {
  return order - arrivingOrder;
}

export function canSubmit(state: ClientState): boolean {
  return state.screen === "play" && !state.awaitingAdvance;
}
