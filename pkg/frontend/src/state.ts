// Shared view state: one selection drives every pane.

import type { ZoomLevel } from "./types.js";

export interface ViewState {
  selected: string | null;
  level: ZoomLevel;
  linkFilter: string[] | null;
  openNodes: Set<string>;
  pane: "tree" | "form" | "mind-map";
}

export type Listener = (state: ViewState) => void;

export class Store {
  private state: ViewState = {
    selected: null,
    level: "statements",
    linkFilter: null,
    openNodes: new Set(),
    pane: "tree",
  };
  private listeners: Listener[] = [];

  get(): ViewState {
    return this.state;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  update(partial: Partial<ViewState>): void {
    this.state = { ...this.state, ...partial };
    for (const listener of this.listeners) {
      listener(this.state);
    }
  }

  toggleNode(gupri: string): void {
    const open = new Set(this.state.openNodes);
    if (open.has(gupri)) {
      open.delete(gupri);
    } else {
      open.add(gupri);
    }
    this.update({ openNodes: open });
  }
}
