// DOM wiring: one seat per tab; server events applied in arrival order.

import { ApiError, GameClient, subscribe } from "./api.js";
import { render } from "./render.js";
import {
  applyError,
  applySeatState,
  canSubmit,
  impliedAdjustment,
  initialState,
  markSubmitted,
  parseOrder,
  type ClientState,
} from "./state.js";

const client = new GameClient("");
let state: ClientState = initialState();
let unsubscribe: (() => void) | null = null;

const root = document.getElementById("app")!;

function setState(next: ClientState): void {
  state = next;
  root.innerHTML = render(state);
  bind();
}

async function refresh(): Promise<void> {
  if (!state.seat) return;
  try {
    const seat = await client.state(state.session, state.token);
    setState(applySeatState(state, seat));
  } catch (err) {
    setState(applyError(state, err instanceof Error ? err.message : String(err)));
  }
}

async function join(token: string): Promise<void> {
  try {
    const seat = await client.join(token);
    state = { ...state, token };
    setState(applySeatState(state, seat));
    unsubscribe?.();
    unsubscribe = subscribe(client, seat.session, token, () => void refresh());
  } catch (err) {
    setState(applyError(state, err instanceof ApiError ? err.message : "could not reach the server"));
  }
}

async function submit(raw: string): Promise<void> {
  const order = parseOrder(raw);
  if (order === null) {
    setState(applyError(state, "orders are non-negative whole numbers"));
    return;
  }
  if (!canSubmit(state)) return;
  setState(markSubmitted(state)); // optimistic lock until the period advances
  try {
    await client.submitOrder(state.session, state.token, order);
  } catch (err) {
    // server rejection: render it verbatim and re-enable the input
    state = { ...state, awaitingAdvance: false };
    setState(applyError(state, err instanceof Error ? err.message : String(err)));
  }
}

function bind(): void {
  const joinForm = document.getElementById("join-form") as HTMLFormElement | null;
  joinForm?.addEventListener("submit", (ev) => {
    ev.preventDefault();
    const input = document.getElementById("token-input") as HTMLInputElement;
    void join(input.value.trim());
  });

  const orderForm = document.getElementById("order-form") as HTMLFormElement | null;
  const orderInput = document.getElementById("order-input") as HTMLInputElement | null;
  orderInput?.addEventListener("input", () => {
    const hint = document.getElementById("dx-hint");
    const ao = state.seat?.seat?.arriving_order ?? 0;
    const parsed = parseOrder(orderInput.value);
    if (hint) {
      hint.textContent =
        parsed === null
          ? orderInput.value.trim() === "" ? "" : "whole numbers only"
          : `d=${ao}, x=${impliedAdjustment(parsed, ao) >= 0 ? "+" : ""}${impliedAdjustment(parsed, ao)}`;
    }
  });
  orderForm?.addEventListener("submit", (ev) => {
    ev.preventDefault();
    if (orderInput) void submit(orderInput.value);
  });
}

setState(state);

const params = new URLSearchParams(window.location.search);
const token = params.get("token");
if (token) void join(token);
