// Tiny expression evaluator for op parameters, so inputs like "pi", "e^-1"
// or "tan(0.5)" work without eval(). Recursive descent over + - * / ^ with
// parentheses, unary minus, and a fixed set of constants and functions.

const CONSTANTS: Record<string, number> = {
  pi: Math.PI,
  tau: 2 * Math.PI,
  e: Math.E,
};

const FUNCTIONS: Record<string, (x: number) => number> = {
  sin: Math.sin,
  cos: Math.cos,
  tan: Math.tan,
  atan: Math.atan,
  sqrt: Math.sqrt,
  exp: Math.exp,
  ln: Math.log,
  log: Math.log,
  abs: Math.abs,
};

class Parser {
  private pos = 0;

  constructor(private readonly text: string) {}

  parse(): number {
    const value = this.sum();
    this.skipSpace();
    if (this.pos !== this.text.length) {
      throw new Error(`unexpected input at position ${this.pos}`);
    }
    return value;
  }

  private skipSpace() {
    while (this.pos < this.text.length && /\s/.test(this.text[this.pos])) this.pos++;
  }

  private peek(): string {
    this.skipSpace();
    return this.text[this.pos] ?? "";
  }

  private sum(): number {
    let value = this.product();
    for (;;) {
      const c = this.peek();
      if (c === "+") { this.pos++; value += this.product(); }
      else if (c === "-") { this.pos++; value -= this.product(); }
      else return value;
    }
  }

  private product(): number {
    let value = this.power();
    for (;;) {
      const c = this.peek();
      if (c === "*") { this.pos++; value *= this.power(); }
      else if (c === "/") { this.pos++; value /= this.power(); }
      else return value;
    }
  }

  private power(): number {
    const base = this.unary();
    if (this.peek() === "^") {
      this.pos++;
      return Math.pow(base, this.power()); // right associative
    }
    return base;
  }

  private unary(): number {
    const c = this.peek();
    if (c === "-") { this.pos++; return -this.unary(); }
    if (c === "+") { this.pos++; return this.unary(); }
    return this.atom();
  }

  private atom(): number {
    this.skipSpace();
    const c = this.peek();
    if (c === "(") {
      this.pos++;
      const value = this.sum();
      if (this.peek() !== ")") throw new Error("missing closing parenthesis");
      this.pos++;
      return value;
    }
    const rest = this.text.slice(this.pos);
    const num = rest.match(/^\d+(\.\d+)?([eE][+-]?\d+)?/);
    if (num) {
      this.pos += num[0].length;
      return parseFloat(num[0]);
    }
    const word = rest.match(/^[A-Za-z_]+/);
    if (word) {
      this.pos += word[0].length;
      const name = word[0].toLowerCase();
      if (this.peek() === "(") {
        const fn = FUNCTIONS[name];
        if (!fn) throw new Error(`unknown function '${name}'`);
        this.pos++;
        const arg = this.sum();
        if (this.peek() !== ")") throw new Error("missing closing parenthesis");
        this.pos++;
        return fn(arg);
      }
      if (name in CONSTANTS) return CONSTANTS[name];
      throw new Error(`unknown name '${name}'`);
    }
    throw new Error(`cannot parse at position ${this.pos}`);
  }
}

export function evaluateExpression(text: string): number {
  const value = new Parser(text).parse();
  if (!Number.isFinite(value)) throw new Error("expression is not finite");
  return value;
}
