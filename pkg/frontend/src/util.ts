export function debounce<A extends unknown[]>(
    fn: (...args: A) => void,
    delayMs: number,
): (...args: A) => void {
    let timer: ReturnType<typeof setTimeout> | undefined;
    return (...args: A) => {
        if (timer !== undefined) clearTimeout(timer);
        timer = setTimeout(() => fn(...args), delayMs);
    };
}

// Discards responses that arrive after a newer request was issued.
export class SequenceGate {
    private latest = 0;

    next(): number {
        return ++this.latest;
    }

    isCurrent(seq: number): boolean {
        return seq === this.latest;
    }
}

export function el<K extends keyof HTMLElementTagNameMap>(
    tag: K,
    attrs: Record<string, string> = {},
    ...children: (Node | string)[]
): HTMLElementTagNameMap[K] {
    const node = document.createElement(tag);
    for (const [key, value] of Object.entries(attrs)) {
        if (key === "class") node.className = value;
        else node.setAttribute(key, value);
    }
    node.append(...children);
    return node;
}
