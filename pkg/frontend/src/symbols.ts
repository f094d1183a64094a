// Generated by scripts/gen_frontend_assets.py from belnet/markup/symbols.tsv
// Do not edit by hand.

export const SYMBOLS: Record<string, string> = {
  Alpha: "\u{0391}",
  Beta: "\u{0392}",
  Chi: "\u{03A7}",
  Delta: "\u{0394}",
  Epsilon: "\u{0395}",
  Eta: "\u{0397}",
  Gamma: "\u{0393}",
  Iota: "\u{0399}",
  Kappa: "\u{039A}",
  Lambda: "\u{039B}",
  Mu: "\u{039C}",
  Nu: "\u{039D}",
  Omega: "\u{03A9}",
  Omicron: "\u{039F}",
  Phi: "\u{03A6}",
  Pi: "\u{03A0}",
  Psi: "\u{03A8}",
  Rho: "\u{03A1}",
  Sigma: "\u{03A3}",
  Tau: "\u{03A4}",
  Theta: "\u{0398}",
  Upsilon: "\u{03A5}",
  Xi: "\u{039E}",
  Zeta: "\u{0396}",
  alpha: "\u{03B1}",
  beta: "\u{03B2}",
  cdot: "\u{22C5}",
  chi: "\u{03C7}",
  delta: "\u{03B4}",
  epsilon: "\u{03B5}",
  eta: "\u{03B7}",
  gamma: "\u{03B3}",
  geq: "\u{2265}",
  infty: "\u{221E}",
  iota: "\u{03B9}",
  kappa: "\u{03BA}",
  lambda: "\u{03BB}",
  leq: "\u{2264}",
  mu: "\u{03BC}",
  nu: "\u{03BD}",
  omega: "\u{03C9}",
  omicron: "\u{03BF}",
  phi: "\u{03C6}",
  pi: "\u{03C0}",
  pm: "\u{00B1}",
  psi: "\u{03C8}",
  rho: "\u{03C1}",
  rightarrow: "\u{2192}",
  sigma: "\u{03C3}",
  tau: "\u{03C4}",
  theta: "\u{03B8}",
  times: "\u{00D7}",
  upsilon: "\u{03C5}",
  xi: "\u{03BE}",
  zeta: "\u{03B6}",
};

export const OPERATOR_NAMES = new Set(["cdot", "geq", "leq", "pm", "rightarrow", "times"]);
export const FUNCTION_NAMES = new Set(["cos", "exp", "ln", "log", "sin"]);
export const STRUCTURE_NAMES = new Set(["frac", "sqrt"]);
