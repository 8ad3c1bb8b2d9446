// DOM helpers. SVG and HTML elements are built directly, no framework.

const SVG_NS = "http://www.w3.org/2000/svg";

type Attrs = Record<string, string | number>;

export function el<K extends keyof HTMLElementTagNameMap>(
    tag: K,
    attrs: Attrs = {},
    text?: string,
): HTMLElementTagNameMap[K] {
    const node = document.createElement(tag);
    for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, String(v));
    if (text !== undefined) node.textContent = text;
    return node;
}

export function svg<K extends keyof SVGElementTagNameMap>(
    tag: K,
    attrs: Attrs = {},
    text?: string,
): SVGElementTagNameMap[K] {
    const node = document.createElementNS(SVG_NS, tag);
    for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, String(v));
    if (text !== undefined) node.textContent = text;
    return node;
}

export function clear(node: Element): void {
    while (node.firstChild) node.removeChild(node.firstChild);
}

// Categorical colors for cluster/group identity (distinct from the
// sequential score palette, which always comes from the server payload).
export const GROUP_COLORS = [
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
    "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac",
];

export function groupColor(index: number): string {
    return GROUP_COLORS[index % GROUP_COLORS.length];
}
