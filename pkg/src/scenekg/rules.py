"""The classification rule set and its one-line-per-rule text form.

Example line:

    R1: contains(A,B) & !floating(B) => shelf(A), product(B) @ {0.9 9}

Premise atoms are binary relation patterns, `floating(X)` / `!floating(X)`
unary patterns, or label patterns (`shelf(S)`, `product(P)`) that match
statements derived in earlier passes. Conclusions are label patterns.
A negated atom is a guard: it constrains the match but contributes no
evidence. The trailing `{f w}` is the rule's prior truth.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import PremiseSyntaxError
from .truth import TruthValue

LABEL_OF = {"shelf": "Shelf", "product": "Product", "other": "Other"}


@dataclass(frozen=True)
class Atom:
    name: str
    args: tuple
    negated: bool = False

    @property
    def is_label(self):
        return self.name in LABEL_OF

    def __str__(self):
        bang = "!" if self.negated else ""
        return f"{bang}{self.name}({','.join(self.args)})"


@dataclass(frozen=True)
class Rule:
    id: str
    premises: tuple
    conclusions: tuple  # (label, variable) pairs
    prior: TruthValue

    def __str__(self):
        lhs = " & ".join(str(a) for a in self.premises)
        rhs = ", ".join(f"{name.lower()}({var})"
                        for name, var in self.conclusions)
        prior_w = self.prior.w
        w_text = str(int(prior_w)) if prior_w == int(prior_w) else f"{prior_w:g}"
        return f"{self.id}: {lhs} => {rhs} @ {{{self.prior.f:g} {w_text}}}"


DEFAULT_RULES_TEXT = """\
R1: contains(A,B) & !floating(B) => shelf(A), product(B) @ {0.9 9}
R2: aligned_v(A,S) & shelf(S) => shelf(A) @ {0.9 9}
R3: aligned_h(A,P) & product(P) => product(A) @ {0.9 9}
R4: on_top_of(A,P) & floating(A) & product(P) => product(A) @ {0.9 9}
"""

_ATOM_RE = re.compile(r"^(!?)([a-z_]+)\(([A-Za-z0-9_,]+)\)$")
_RULE_RE = re.compile(
    r"^(\w+):\s*(.+?)\s*=>\s*(.+?)\s*@\s*\{([0-9.]+)\s+([0-9.]+)\}$")


def _parse_atom(text: str, line_no: int) -> Atom:
    match = _ATOM_RE.match(text.strip())
    if not match:
        raise PremiseSyntaxError(line_no, f"bad atom: {text!r}")
    bang, name, args = match.groups()
    return Atom(name, tuple(a.strip() for a in args.split(",")),
                negated=bool(bang))


def parse_rules(text: str) -> list:
    rules = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        match = _RULE_RE.match(line)
        if not match:
            raise PremiseSyntaxError(line_no, f"bad rule line: {line!r}")
        rule_id, lhs, rhs, f, w = match.groups()
        premises = tuple(_parse_atom(p, line_no) for p in lhs.split("&"))
        conclusions = []
        for part in rhs.split(","):
            atom = _parse_atom(part, line_no)
            if not atom.is_label or atom.negated or len(atom.args) != 1:
                raise PremiseSyntaxError(
                    line_no, f"conclusion must be a positive label atom: {part!r}")
            conclusions.append((LABEL_OF[atom.name], atom.args[0]))
        rules.append(Rule(rule_id, premises, tuple(conclusions),
                          TruthValue(float(f), float(w))))
    return rules


def format_rules(rules) -> str:
    return "".join(str(r) + "\n" for r in rules)


def default_rules() -> list:
    return parse_rules(DEFAULT_RULES_TEXT)
