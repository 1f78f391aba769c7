/** Minimal virtual DOM: views build plain trees, the browser mounts them.
 *
 * Views are pure functions from state to VNode, so tests can walk the
 * tree in plain node without a DOM emulator.  `mount` is the only code
 * that touches `document`, and it rebuilds its container wholesale; at
 * this screen size (two small graphs and a table) diffing would be
 * complexity without payoff.
 */

export type Child = VNode | string;

export interface VNode {
    tag: string;
    attrs: Record<string, string>;
    on: Record<string, (ev: Event) => void>;
    children: Child[];
}

export type Attrs = Record<string, string | ((ev: Event) => void)>;

/** Hyperscript helper: `h("div", {class: "x", onclick: f}, ...children)`. */
export function h(tag: string, attrs: Attrs = {}, ...children: Child[]): VNode {
    const plain: Record<string, string> = {};
    const on: Record<string, (ev: Event) => void> = {};
    for (const [key, value] of Object.entries(attrs)) {
        if (typeof value === "function") {
            on[key.replace(/^on/, "")] = value;
        } else {
            plain[key] = value;
        }
    }
    return { tag, attrs: plain, on, children };
}

const SVG_NS = "http://www.w3.org/2000/svg";
const SVG_TAGS = new Set([
    "svg", "g", "circle", "rect", "line", "path", "text", "title", "polyline",
]);

function realize(node: Child): Node {
    if (typeof node === "string") {
        return document.createTextNode(node);
    }
    const el = SVG_TAGS.has(node.tag)
        ? document.createElementNS(SVG_NS, node.tag)
        : document.createElement(node.tag);
    for (const [key, value] of Object.entries(node.attrs)) {
        el.setAttribute(key, value);
    }
    // Attributes only set the default; textareas need the live value.
    if (node.tag === "textarea" && "value" in node.attrs) {
        (el as HTMLTextAreaElement).value = node.attrs["value"] ?? "";
    }
    for (const [event, handler] of Object.entries(node.on)) {
        el.addEventListener(event, handler);
    }
    for (const child of node.children) {
        el.appendChild(realize(child));
    }
    return el;
}

/** Replace `container`'s content with the realized tree. */
export function mount(root: VNode, container: Element): void {
    container.replaceChildren(realize(root));
}

// ---- tree queries, used by tests and by nothing else ----

export function walk(root: VNode, visit: (node: VNode) => void): void {
    visit(root);
    for (const child of root.children) {
        if (typeof child !== "string") {
            walk(child, visit);
        }
    }
}

export function findAll(root: VNode, pred: (node: VNode) => boolean): VNode[] {
    const hits: VNode[] = [];
    walk(root, node => {
        if (pred(node)) {
            hits.push(node);
        }
    });
    return hits;
}

export function byClass(root: VNode, cls: string): VNode[] {
    return findAll(root, n => (n.attrs["class"] ?? "").split(" ").includes(cls));
}

/** All text content under the node, concatenated in document order. */
export function textOf(node: Child): string {
    if (typeof node === "string") {
        return node;
    }
    return node.children.map(textOf).join("");
}
