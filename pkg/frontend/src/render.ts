// Pure view functions: ClientState in, HTML string out.  The renderer only
// touches fields present in server payloads.

import { lineChart, Series } from "./chart.js";
import type { ClientState } from "./state.js";
import type { Reveal, SeatState } from "./types.js";

const esc = (s: unknown): string =>
  String(s).replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");

export function renderJoin(error: string | null): string {
  return `
  <section class="join">
    <h1>beer game</h1>
    <p>Paste your seat token to join a session.</p>
    <form id="join-form">
      <input id="token-input" placeholder="seat token" autocomplete="off"/>
      <button id="join-button" type="submit">join</button>
    </form>
    ${error ? `<p class="error" id="join-error">${esc(error)}</p>` : ""}
  </section>`;
}

export function renderLobby(seat: SeatState): string {
  return `
  <section class="lobby">
    <h1>waiting to start</h1>
    <p>You are the <strong id="role-label">${esc(seat.role)}</strong> in scenario
       <code>${esc(seat.scenario)}</code>. The game has not started yet.</p>
  </section>`;
}

function historySeries(seat: SeatState): Series[] {
  const rows = seat.seat?.history ?? [];
  const il = rows.map((r) => r[0] - r[1]);
  return [
    { label: "IL", values: il, color: "#1f77b4" },
    { label: "OO", values: rows.map((r) => r[2]), color: "#ff7f0e" },
    { label: "AO", values: rows.map((r) => r[3]), color: "#2ca02c" },
    { label: "AS", values: rows.map((r) => r[4]), color: "#9467bd" },
  ];
}

export function renderPlay(state: ClientState): string {
  const seat = state.seat!;
  const local = seat.seat!;
  const waiting = state.awaitingAdvance;
  return `
  <section class="play">
    <header>
      <h1><span id="role-label">${esc(seat.role)}</span> &middot; period ${seat.period}</h1>
      <p>scenario <code>${esc(seat.scenario)}</code> &middot; your cost so far
         <strong id="cumulative-cost">${seat.cumulative_cost?.toFixed(2)}</strong></p>
    </header>
    <dl class="stats">
      <dt>inventory level</dt><dd id="stat-il">${local.inventory_level}</dd>
      <dt>on order</dt><dd id="stat-oo">${local.on_order}</dd>
      <dt>incoming order</dt><dd id="stat-ao">${local.arriving_order}</dd>
      <dt>incoming shipment</dt><dd id="stat-as">${local.arriving_shipment}</dd>
    </dl>
    ${lineChart(historySeries(seat), 420, 160, "local history")}
    <form id="order-form">
      <label>order
        <input id="order-input" inputmode="numeric" pattern="[0-9]*" ${waiting ? "disabled" : ""}/>
      </label>
      <button id="order-button" type="submit" ${waiting ? "disabled" : ""}>submit</button>
      <span id="dx-hint" class="hint"></span>
    </form>
    ${waiting ? `<p id="waiting" class="waiting">order submitted &mdash; waiting for the other players&hellip;</p>` : ""}
    ${state.error ? `<p class="error" id="order-error">${esc(state.error)}</p>` : ""}
  </section>`;
}

function tracePanel(reveal: Reveal, agent: number): string {
  const rows = reveal.trace.filter((r) => r.agent === agent);
  const series: Series[] = [
    { label: "IL", values: rows.map((r) => r.IL), color: "#1f77b4" },
    { label: "OO", values: rows.map((r) => r.OO), color: "#ff7f0e" },
    { label: "a", values: rows.map((r) => r.a), color: "#2ca02c" },
    { label: "r", values: rows.map((r) => r.r), color: "#d62728" },
  ];
  return `
  <figure class="trace-panel" data-agent="${agent}">
    <figcaption>${esc(reveal.roles[agent])}</figcaption>
    ${lineChart(series, 360, 140, `trace for ${reveal.roles[agent]}`)}
  </figure>`;
}

export function renderReveal(seat: SeatState): string {
  const reveal = seat.reveal!;
  const rows = reveal.roles
    .map(
      (role, i) => `
      <tr data-role="${esc(role)}"><td>${esc(role)}</td>
      <td class="num agent-cost">${reveal.per_agent_costs[i].toFixed(2)}</td></tr>`,
    )
    .join("");
  return `
  <section class="reveal">
    <h1>game over</h1>
    <p>You played the <strong id="role-label">${esc(seat.role)}</strong> for ${reveal.periods} periods.</p>
    <table class="costs">
      <thead><tr><th>agent</th><th>total cost</th></tr></thead>
      <tbody>${rows}</tbody>
      <tfoot><tr><td>system</td><td class="num" id="total-cost">${reveal.total_cost.toFixed(2)}</td></tr></tfoot>
    </table>
    <div class="traces">${reveal.roles.map((_, i) => tracePanel(reveal, i)).join("")}</div>
  </section>`;
}

export function render(state: ClientState): string {
  switch (state.screen) {
    case "join":
    case "error":
      return renderJoin(state.error);
    case "lobby":
      return renderLobby(state.seat!);
    case "play":
      return renderPlay(state);
    case "reveal":
      return renderReveal(state.seat!);
  }
}
