// Wire types for the game server's versioned JSON payloads.

export type SessionStatus = "lobby" | "in_play" | "finished";

// one observation row per period: [IL+, IL-, OO, AO, AS]
export type HistoryRow = [number, number, number, number, number];

export interface SeatLocal {
  inventory_level: number;
  on_order: number;
  arriving_order: number;
  arriving_shipment: number;
  history: HistoryRow[];
}

export interface TraceRow {
  period: number;
  agent: number;
  role: string;
  IL: number;
  OO: number;
  a: number;
  r: number;
  OUTL: number;
}

export interface Reveal {
  per_agent_costs: number[];
  roles: string[];
  total_cost: number;
  periods: number;
  trace: TraceRow[];
}

export interface SeatState {
  v: number;
  session: string;
  status: SessionStatus;
  role: string;
  agent: number;
  scenario: string;
  period?: number;
  submitted?: boolean;
  cumulative_cost?: number;
  seat?: SeatLocal;
  reveal?: Reveal;
}

export interface ServerEvent {
  seq: number;
  type: "started" | "period_advanced" | "finished";
  period?: number;
}

export interface EventBatch {
  v: number;
  events: ServerEvent[];
  status: SessionStatus;
}
