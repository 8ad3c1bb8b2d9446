// Transient error/info messages, bottom-right stack.

import { el } from "./render.js";

const TOAST_MS = 4000;

export function toast(message: string, kind: "error" | "info" = "error"): HTMLElement {
    let holder = document.getElementById("toasts");
    if (!holder) {
        holder = el("div", { id: "toasts" });
        document.body.appendChild(holder);
    }
    const node = el("div", { class: `toast toast-${kind}` }, message);
    holder.appendChild(node);
    setTimeout(() => node.remove(), TOAST_MS);
    return node;
}
