"""Probabilistic string-type machines.

Each recognized string type is a small probabilistic finite-state machine
compiled from a declarative pattern. Compilation goes pattern -> NFA ->
deterministic state graph (subset construction over an atomic partition of
the character classes), so every state has at most one transition per input
character. Emission weights are uniform over the outgoing transitions of a
state, which makes specific machines assign much higher probability to
their own strings than permissive ones do.

The log-probability of a string is the sum of log emission weights along
its unique path, or -inf when the machine rejects. Machines serialize to
and from a JSON document so new types can be added without code changes.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

NEG_INF = float("-inf")

#: Size of the printable alphabet used by the uniform (noise) models.
UNIFORM_ALPHABET_SIZE = 96

# Canonical kind names. The first nine are the recognized string features;
# integer/float cover plain numeric data; missing/anomaly are the noise
# models; "standard" is the fallback for text no feature machine accepts.
COORDINATE = "coordinate"
DAY = "day"
EMAIL = "email"
FILEPATH = "filepath"
MONTH = "month"
NUMERICAL = "numerical"
SENTENCE = "sentence"
URL = "url"
ZIPCODE = "zipcode"
STANDARD = "standard"
INTEGER = "integer"
FLOAT = "float"
MISSING = "missing"
ANOMALY = "anomaly"

FEATURE_KINDS = (COORDINATE, DAY, EMAIL, FILEPATH, MONTH, NUMERICAL,
                 SENTENCE, URL, ZIPCODE)
#: Fixed registry order; also the tie-break order for column inference.
REGISTRY_ORDER = FEATURE_KINDS + (INTEGER, FLOAT, MISSING, ANOMALY)
#: Kinds a column can resolve to, in tie-break order.
CANDIDATE_ORDER = FEATURE_KINDS + (INTEGER, FLOAT, STANDARD)

_DIGITS = "0123456789"
_LOWER = "abcdefghijklmnopqrstuvwxyz"
_UPPER = _LOWER.upper()
_LETTERS = _LOWER + _UPPER


class InvalidSpecError(ValueError):
    """Malformed machine definition."""


# ---------------------------------------------------------------------------
# Pattern AST


@dataclass(frozen=True)
class Lit:
    text: str


@dataclass(frozen=True)
class Cls:
    chars: str


@dataclass(frozen=True)
class NotCls:
    chars: str


@dataclass(frozen=True)
class Seq:
    parts: tuple


@dataclass(frozen=True)
class Alt:
    options: tuple


@dataclass(frozen=True)
class Rep:
    part: object
    lo: int
    hi: int | None  # None = unbounded


def seq(*parts):
    return Seq(tuple(parts))


def alt(*options):
    return Alt(tuple(options))


def opt(p):
    return Rep(p, 0, 1)


def star(p):
    return Rep(p, 0, None)


def plus(p):
    return Rep(p, 1, None)


def rep(p, lo, hi=None):
    return Rep(p, lo, hi)


# ---------------------------------------------------------------------------
# NFA construction (Thompson style, classes on edges)


class _Nfa:
    def __init__(self):
        self.n = 0
        self.eps = []     # list of (src, dst)
        self.edges = []   # list of (src, (negated, chars), dst)

    def state(self):
        s = self.n
        self.n += 1
        return s

    def build(self, p):
        """Return (start, end) fragment for pattern p."""
        if isinstance(p, Lit):
            if not p.text:
                raise InvalidSpecError("empty literal")
            return self.build(Seq(tuple(Cls(ch) for ch in p.text)))
        if isinstance(p, Cls):
            if not p.chars:
                raise InvalidSpecError("empty character class")
            a, b = self.state(), self.state()
            self.edges.append((a, (False, frozenset(p.chars)), b))
            return a, b
        if isinstance(p, NotCls):
            a, b = self.state(), self.state()
            self.edges.append((a, (True, frozenset(p.chars)), b))
            return a, b
        if isinstance(p, Seq):
            if not p.parts:
                a = self.state()
                return a, a
            start, end = self.build(p.parts[0])
            for part in p.parts[1:]:
                s, e = self.build(part)
                self.eps.append((end, s))
                end = e
            return start, end
        if isinstance(p, Alt):
            if not p.options:
                raise InvalidSpecError("empty alternative")
            a, b = self.state(), self.state()
            for option in p.options:
                s, e = self.build(option)
                self.eps.append((a, s))
                self.eps.append((e, b))
            return a, b
        if isinstance(p, Rep):
            if p.hi is not None and p.hi < p.lo:
                raise InvalidSpecError("repetition with hi < lo")
            a = self.state()
            end = a
            for _ in range(p.lo):
                s, e = self.build(p.part)
                self.eps.append((end, s))
                end = e
            if p.hi is None:
                s, e = self.build(p.part)
                self.eps.append((end, s))
                self.eps.append((e, end))
                return a, end
            tail_ends = [end]
            for _ in range(p.hi - p.lo):
                s, e = self.build(p.part)
                self.eps.append((end, s))
                end = e
                tail_ends.append(end)
            final = self.state()
            for t in tail_ends:
                self.eps.append((t, final))
            return a, final
        raise InvalidSpecError(f"unknown pattern node: {p!r}")


def _closure(states, eps_adj):
    seen = set(states)
    stack = list(states)
    while stack:
        s = stack.pop()
        for t in eps_adj.get(s, ()):
            if t not in seen:
                seen.add(t)
                stack.append(t)
    return frozenset(seen)


# ---------------------------------------------------------------------------
# Compiled machine


@dataclass
class Machine:
    """Deterministic probabilistic state graph for one string type.

    ``transitions[s]`` is a list of ``(negated, chars, target, log_weight)``
    tuples; at most one entry matches any input character.
    """

    kind: str
    case_insensitive: bool = False
    start: int = 0
    accepting: frozenset = frozenset()
    transitions: list = field(default_factory=list)
    # fast per-state lookup, built lazily: dict char -> (target, logw),
    # plus the single negated-class fallback if present
    _maps: list = field(default_factory=list, repr=False)

    def __post_init__(self):
        self._build_maps()

    def _build_maps(self):
        self._maps = []
        for edges in self.transitions:
            cmap = {}
            fallback = None
            for negated, chars, target, logw in edges:
                if negated:
                    if fallback is not None:
                        raise InvalidSpecError(
                            f"{self.kind}: two complement classes on one state")
                    fallback = (chars, target, logw)
                else:
                    for ch in chars:
                        if ch in cmap:
                            raise InvalidSpecError(
                                f"{self.kind}: ambiguous transition on {ch!r}")
                        cmap[ch] = (target, logw)
            self._maps.append((cmap, fallback))

    @property
    def n_states(self) -> int:
        return len(self.transitions)

    def log_prob(self, value: str) -> float:
        """Sum of log emission weights along the accepting path, or -inf."""
        if self.case_insensitive:
            value = value.lower()
        state = self.start
        total = 0.0
        for ch in value:
            cmap, fallback = self._maps[state]
            hit = cmap.get(ch)
            if hit is None:
                if fallback is not None and ch not in fallback[0]:
                    state, logw = fallback[1], fallback[2]
                else:
                    return NEG_INF
            else:
                state, logw = hit
            total += logw
        return total if state in self.accepting else NEG_INF

    def accepts(self, value: str) -> bool:
        return self.log_prob(value) > NEG_INF

    def sample(self, rng, max_len: int = 40) -> str:
        """Generate a string this machine accepts (random walk over edges)."""
        dist = self._distance_to_accept()
        state = self.start
        out = []
        while True:
            edges = self.transitions[state]
            accepting = state in self.accepting
            if accepting and (not edges or rng.random() < 0.35):
                return "".join(out)
            if not edges:
                return "".join(out)
            if len(out) >= max_len:
                if accepting:
                    return "".join(out)
                # steer toward the nearest accepting state
                here = dist.get(state, math.inf)
                edges = [e for e in edges
                         if dist.get(e[2], math.inf) < here] or edges
            negated, chars, target, _ = edges[rng.randrange(len(edges))]
            if negated:
                pool = [c for c in _LOWER + _DIGITS + " .-" if c not in chars]
            else:
                pool = sorted(chars)
            out.append(pool[rng.randrange(len(pool))])
            state = target

    def _distance_to_accept(self):
        dist = {s: 0 for s in self.accepting}
        frontier = list(self.accepting)
        incoming = {}
        for s, edges in enumerate(self.transitions):
            for _, _, t, _ in edges:
                incoming.setdefault(t, []).append(s)
        while frontier:
            nxt = []
            for t in frontier:
                for s in incoming.get(t, ()):
                    if s not in dist:
                        dist[s] = dist[t] + 1
                        nxt.append(s)
            frontier = nxt
        return dist

    def to_json(self) -> dict:
        edges = []
        for s, lst in enumerate(self.transitions):
            for negated, chars, target, logw in lst:
                entry = {"from": s, "to": target, "weight": math.exp(logw)}
                key = "not_chars" if negated else "chars"
                entry[key] = "".join(sorted(chars))
                edges.append(entry)
        return {
            "kind": self.kind,
            "model": "graph",
            "case_insensitive": self.case_insensitive,
            "start": self.start,
            "n_states": self.n_states,
            "accepting": sorted(self.accepting),
            "edges": edges,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "Machine":
        try:
            n = int(doc["n_states"])
            transitions = [[] for _ in range(n)]
            for e in doc["edges"]:
                negated = "not_chars" in e
                chars = frozenset(e["not_chars" if negated else "chars"])
                w = float(e["weight"])
                if not 0.0 < w <= 1.0:
                    raise InvalidSpecError(f"weight out of range: {w}")
                transitions[int(e["from"])].append(
                    (negated, chars, int(e["to"]), math.log(w)))
            m = cls(kind=str(doc["kind"]),
                    case_insensitive=bool(doc.get("case_insensitive", False)),
                    start=int(doc["start"]),
                    accepting=frozenset(int(s) for s in doc["accepting"]),
                    transitions=transitions)
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidSpecError(f"bad machine document: {exc}") from exc
        m.validate()
        return m

    def validate(self):
        """Check weight normalization and per-character determinism."""
        for s, edges in enumerate(self.transitions):
            if not edges:
                continue
            total = sum(math.exp(logw) for _, _, _, logw in edges)
            if abs(total - 1.0) > 1e-9:
                raise InvalidSpecError(
                    f"{self.kind}: state {s} weights sum to {total}")
        # determinism is enforced structurally by _build_maps
        self._build_maps()


@dataclass
class UniformMachine:
    """Length-calibrated noise model: every character costs 1/|alphabet|."""

    kind: str
    alphabet_size: int = UNIFORM_ALPHABET_SIZE

    def __post_init__(self):
        self._log_char = -math.log(self.alphabet_size)

    def log_prob(self, value: str) -> float:
        return len(value) * self._log_char

    def accepts(self, value: str) -> bool:
        return True

    def to_json(self) -> dict:
        return {"kind": self.kind, "model": "uniform",
                "alphabet_size": self.alphabet_size}

    @classmethod
    def from_json(cls, doc: dict) -> "UniformMachine":
        return cls(kind=str(doc["kind"]),
                   alphabet_size=int(doc.get("alphabet_size",
                                             UNIFORM_ALPHABET_SIZE)))

    def validate(self):
        if self.alphabet_size < 2:
            raise InvalidSpecError("uniform alphabet too small")


def compile_machine(pattern, kind: str, case_insensitive: bool = False) -> Machine:
    """Compile a pattern AST into a deterministic weighted state graph."""
    nfa = _Nfa()
    start, accept = nfa.build(pattern)

    eps_adj = {}
    for s, t in nfa.eps:
        eps_adj.setdefault(s, []).append(t)
    by_src = {}
    for s, label, t in nfa.edges:
        by_src.setdefault(s, []).append((label, t))

    mentioned = sorted({c for _, (_, chars), _ in nfa.edges for c in chars})
    atoms = [(False, c) for c in mentioned] + [(True, None)]  # True = "other"

    def label_matches(label, atom):
        negated, chars = label
        other = atom[0]
        if other:
            return negated  # only complement classes cover unmentioned chars
        c = atom[1]
        return (c not in chars) if negated else (c in chars)

    start_set = _closure({start}, eps_adj)
    states = {start_set: 0}
    order = [start_set]
    raw_edges = {}  # state index -> list of (atom, target index)
    i = 0
    while i < len(order):
        cur = order[i]
        lst = []
        for atom in atoms:
            targets = set()
            for s in cur:
                for label, t in by_src.get(s, ()):
                    if label_matches(label, atom):
                        targets.add(t)
            if not targets:
                continue
            dst = _closure(targets, eps_adj)
            if dst not in states:
                states[dst] = len(order)
                order.append(dst)
            lst.append((atom, states[dst]))
        raw_edges[i] = lst
        i += 1

    accepting = {states[s] for s in order if accept in s}

    # prune states that cannot reach acceptance
    incoming = {}
    for s, lst in raw_edges.items():
        for _, t in lst:
            incoming.setdefault(t, set()).add(s)
    alive = set(accepting)
    frontier = list(accepting)
    while frontier:
        nxt = []
        for t in frontier:
            for s in incoming.get(t, ()):
                if s not in alive:
                    alive.add(s)
                    nxt.append(s)
        frontier = nxt
    if 0 not in alive:
        raise InvalidSpecError(f"{kind}: machine accepts nothing")

    remap = {}
    for old in sorted(alive):
        remap[old] = len(remap)

    # merge atoms by target and attach uniform weights
    transitions = [[] for _ in range(len(remap))]
    for old, lst in raw_edges.items():
        if old not in remap:
            continue
        groups = {}
        for atom, target in lst:
            if target not in alive:
                continue
            groups.setdefault(target, []).append(atom)
        edges = []
        for target, atom_group in sorted(groups.items()):
            chars = frozenset(a[1] for a in atom_group if not a[0])
            has_other = any(a[0] for a in atom_group)
            if has_other:
                excluded = frozenset(mentioned) - chars
                edges.append((True, excluded, remap[target]))
            else:
                edges.append((False, chars, remap[target]))
        if edges:
            logw = -math.log(len(edges))
            transitions[remap[old]] = [(n, c, t, logw) for n, c, t in edges]

    return Machine(kind=kind,
                   case_insensitive=case_insensitive,
                   start=remap[0],
                   accepting=frozenset(remap[s] for s in accepting if s in remap),
                   transitions=transitions)


# ---------------------------------------------------------------------------
# The built-in machines

_D = Cls(_DIGITS)


def _digits(lo, hi):
    return rep(_D, lo, hi)


def _coordinate_pattern():
    # two 1-2 digit groups plus a float group, with a cardinal direction at
    # one end; plain form uses . or : separators, DMS form uses degree,
    # minute and second marks.
    two = _digits(1, 2)
    flt = seq(two, opt(seq(Lit("."), plus(_D))))
    sep = Cls(".:")
    dir_first = seq(Cls("NESW"), two, sep, two, sep, flt)
    dms = seq(two, Lit("\u00b0"), two, Lit("'"), flt, Lit('"'), Cls("NESW"))
    part = alt(dir_first, dms)
    return seq(part, opt(seq(Lit(" "), part)))


_DAY_FORMS = (
    "mo", "mon", "monday",
    "tu", "tue", "tues", "tuesday",
    "we", "wed", "weds", "wednesday",
    "th", "thu", "thur", "thurs", "thursday",
    "fr", "fri", "friday",
    "sa", "sat", "saturday",
    "su", "sun", "sunday",
)

MONTH_NAMES = ("january", "february", "march", "april", "may", "june",
               "july", "august", "september", "october", "november",
               "december")


def _day_pattern():
    return alt(*(Lit(f) for f in _DAY_FORMS))


def _email_pattern():
    name = plus(Cls(_LETTERS + _DIGITS + "._%+-"))
    label = plus(Cls(_LETTERS + _DIGITS + "-"))
    return seq(name, Lit("@"), label, plus(seq(Lit("."), label)))


def _filepath_pattern():
    seg = plus(NotCls("\\/:*?\"<>|"))
    sep = Cls("/\\")
    root = alt(seq(Cls(_LETTERS), Lit(":"), sep),     # drive, e.g. C:/
               seq(plus(Lit(".")), sep),              # ./ ../
               sep)                                   # absolute /
    return alt(
        seq(root, opt(seq(seg, star(seq(sep, seg)), opt(sep)))),
        seq(seg, plus(seq(sep, seg)), opt(sep)),
        seq(seg, sep),
    )


def _month_pattern():
    names = []
    for full in MONTH_NAMES:
        for ln in range(3, len(full) + 1):
            names.append(Lit(full[:ln]))
    month = alt(*names)
    day = _digits(1, 2)
    year = alt(_digits(1, 4), seq(Lit("'"), _D, _D))
    sp = Lit(" ")
    return alt(
        seq(day, sp, month, opt(seq(opt(Lit(",")), sp, year))),
        seq(month, opt(seq(sp, day)), opt(seq(opt(Lit(",")), sp, year))),
    )


COMPARATIVE_WORDS = ("less than", "lower than", "under", "below",
                     "greater than", "higher than", "over", "above")


def _numerical_pattern():
    num = seq(plus(_D), opt(seq(Lit("."), plus(_D))))
    range_sep = alt(Cls("-+_/:;&'"), Lit(" to "), Lit(" "))
    words = alt(*(Lit(w) for w in COMPARATIVE_WORDS))
    affix = Cls("<>+$%=")
    return alt(
        seq(num, range_sep, num),
        seq(words, Lit(" "), num),
        seq(affix, num),
        seq(num, affix),
    )


def _sentence_pattern():
    word = plus(NotCls(" "))
    return seq(word, rep(seq(Lit(" "), word), 5, None))


def _url_pattern():
    proto = seq(alt(Lit("http"), Lit("https"), Lit("ftp")), Lit("://"))
    label = plus(Cls(_LOWER + _DIGITS + "-_"))
    tld = rep(Cls(_LOWER), 1, 3)
    domain = seq(label, Lit("."), opt(seq(label, Lit("."))),
                 opt(seq(label, Lit("."))), tld)
    path = plus(seq(Lit("/"), star(NotCls("/ "))))
    return seq(opt(proto), domain, opt(path))


def _zipcode_pattern():
    # matching is case-insensitive, so classes are written lowercase
    a, d, sp = Cls(_LOWER), _D, opt(Lit(" "))
    uk = seq(a, opt(a), d, opt(alt(d, a)), sp, d, a, a)
    nl = seq(d, d, d, d, sp, a, a)
    ca = seq(a, d, a, sp, d, a, d)
    bm = seq(a, a, sp, d, d)
    return alt(uk, nl, ca, bm)


def _integer_pattern():
    return seq(opt(Cls("+-")), plus(_D))


def _float_pattern():
    mantissa = alt(seq(plus(_D), opt(seq(Lit("."), star(_D)))),
                   seq(Lit("."), plus(_D)))
    exponent = seq(Cls("eE"), opt(Cls("+-")), plus(_D))
    return seq(opt(Cls("+-")), mantissa, opt(exponent))


def _missing_pattern(tokens):
    forms = [Lit(t.lower()) for t in tokens if t]
    if not forms:
        forms = [Lit("na")]
    return alt(*forms)


_BUILDERS = {
    COORDINATE: (_coordinate_pattern, False),
    DAY: (_day_pattern, True),
    EMAIL: (_email_pattern, False),
    FILEPATH: (_filepath_pattern, False),
    MONTH: (_month_pattern, True),
    NUMERICAL: (_numerical_pattern, True),
    SENTENCE: (_sentence_pattern, False),
    URL: (_url_pattern, True),
    ZIPCODE: (_zipcode_pattern, True),
    INTEGER: (_integer_pattern, False),
    FLOAT: (_float_pattern, False),
}


@dataclass
class Registry:
    """Ordered, immutable collection of the active machines."""

    machines: tuple

    def __post_init__(self):
        self.machines = tuple(self.machines)
        self._by_kind = {m.kind: m for m in self.machines}

    def __len__(self):
        return len(self.machines)

    def __iter__(self):
        return iter(self.machines)

    def get(self, kind: str):
        return self._by_kind.get(kind)

    def feature_machines(self):
        return tuple(m for m in self.machines if m.kind in FEATURE_KINDS)

    def candidate_kinds(self):
        """Kinds eligible as a column's winner, in tie-break order.

        User-supplied machines slot in after the built-in feature kinds;
        the missing and anomaly models are never candidates.
        """
        present = [m.kind for m in self.machines]
        kinds = [k for k in FEATURE_KINDS if k in present]
        kinds += [k for k in present
                  if k not in REGISTRY_ORDER and k != STANDARD]
        kinds += [k for k in (INTEGER, FLOAT) if k in present]
        kinds.append(STANDARD)
        return tuple(kinds)

    def to_json(self) -> dict:
        return {"format_version": 1,
                "machines": [m.to_json() for m in self.machines]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    @classmethod
    def from_json(cls, doc: dict) -> "Registry":
        if doc.get("format_version") != 1:
            raise InvalidSpecError("unsupported registry format_version")
        machines = []
        for mdoc in doc.get("machines", ()):
            model = mdoc.get("model", "graph")
            if model == "uniform":
                machines.append(UniformMachine.from_json(mdoc))
            elif model == "graph":
                machines.append(Machine.from_json(mdoc))
            else:
                raise InvalidSpecError(f"unknown machine model {model!r}")
        return cls(tuple(machines))

    @classmethod
    def loads(cls, text: str) -> "Registry":
        return cls.from_json(json.loads(text))


def build_registry(disabled=(), missing_tokens=None) -> Registry:
    """Build the default registry: nine feature machines plus the integer,
    float, missing and anomaly machines, in fixed order.

    ``disabled`` removes kinds by name; ``missing_tokens`` overrides the
    tokens the missing machine recognizes.
    """
    from .table import DEFAULT_MISSING_TOKENS
    disabled = set(disabled)
    unknown = disabled - set(REGISTRY_ORDER)
    if unknown:
        raise InvalidSpecError(f"cannot disable unknown kinds: {sorted(unknown)}")
    tokens = missing_tokens if missing_tokens is not None else DEFAULT_MISSING_TOKENS

    machines = []
    for kind in REGISTRY_ORDER:
        if kind in disabled:
            continue
        if kind == MISSING:
            machines.append(compile_machine(_missing_pattern(tokens), MISSING,
                                            case_insensitive=True))
        elif kind == ANOMALY:
            machines.append(UniformMachine(ANOMALY))
        else:
            builder, ci = _BUILDERS[kind]
            machines.append(compile_machine(builder(), kind, case_insensitive=ci))
    return Registry(tuple(machines))


def value_logprob(machine, value: str) -> float:
    """Log-probability the machine assigns to a text value (-inf = reject)."""
    return machine.log_prob(value)
