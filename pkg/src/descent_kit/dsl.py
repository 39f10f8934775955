"""Input language: tower declarations, expression strings, task blocks.

Hand-written tokenizer and recursive-descent parser with precedence
climbing; no parser generator.  A document declares exactly one tower,
followed by any number of task blocks whose payloads carry arithmetic
expressions, vectors "(e1, ..., en)" of expressions, and matrices of row
vectors.  Line comments start with "#".

The module also owns the reverse direction: format_expr / format_document
re-emit parsed syntax canonically, and the eval_* helpers resolve
expression trees into ring elements (scalars in K, elements of L, elements
of L[Xb], or polynomials over L).  Identifiers that do not resolve raise
ResolutionError; the symbol X is only meaningful in truncated-ring
contexts and is rejected elsewhere.
"""

from .errors import (
    DivisionByZero,
    InputError,
    InputSyntaxError,
    ResolutionError,
)
from .fields import PolyRing
from .groebner import PresentedAlgebraL
from .tower import TowerSpec, elt_inverse, validate_tower
from .truncated import from_tower, trunc_invert, xbar

TASK_KINDS = (
    "validate",
    "check-subspace",
    "kform",
    "check-ideal",
    "check-morphism",
    "deform-check",
    "fixed-ring",
    "apply",
    "describe",
)

_PUNCT = set("{}(),+-*/^")


# ------------------------------------------------------------------ tokenizer

def _tokenize(text, line=1, col=1):
    """Token list [(kind, value, line, col)]; kinds: ident, uint, string,
    punct, eof.  Raises InputSyntaxError on stray characters."""
    toks = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(("ident", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(("uint", int(text[i:j]), line, col))
            col += j - i
            i = j
            continue
        if ch == '"':
            j = i + 1
            while j < n and text[j] not in '"\n':
                j += 1
            if j >= n or text[j] != '"':
                raise InputSyntaxError(line, col, "a closing '\"'")
            toks.append(("string", text[i + 1:j], line, col))
            col += j + 1 - i
            i = j + 1
            continue
        if ch in _PUNCT:
            toks.append(("punct", ch, line, col))
            i += 1
            col += 1
            continue
        raise InputSyntaxError(line, col, "a token", repr(ch))
    toks.append(("eof", None, line, col))
    return toks


# ----------------------------------------------------------------- documents

class TowerDecl:
    """Syntactic tower block: p, base variables, sep/insep generator data.

    Expression fields are stored as parsed trees; build_spec resolves them.
    """

    __slots__ = ("p", "base", "sep_name", "minpoly", "autos", "insep")

    def __init__(self, p, base, sep_name, minpoly, autos, insep):
        self.p = p
        self.base = list(base)
        self.sep_name = sep_name
        self.minpoly = minpoly
        self.autos = list(autos)
        self.insep = list(insep)

    def _key(self):
        sep = None
        if self.sep_name is not None:
            sep = (self.sep_name, _ast_key(self.minpoly),
                   tuple((nm, _ast_key(a)) for nm, a in self.autos))
        return (self.p, tuple(self.base), sep,
                tuple((nm, n, _ast_key(a)) for nm, n, a in self.insep))


class TaskDecl:
    """Syntactic task block: kind plus a payload dict of parsed fields."""

    __slots__ = ("kind", "payload", "line", "col")

    def __init__(self, kind, payload, line, col):
        self.kind = kind
        self.payload = payload
        self.line = line
        self.col = col

    def _key(self):
        return (self.kind, _payload_key(self.payload))


class InputDocument:
    """One tower declaration plus the task blocks, in document order."""

    __slots__ = ("decl", "tasks")

    def __init__(self, decl, tasks):
        self.decl = decl
        self.tasks = list(tasks)

    def _key(self):
        return (self.decl._key(), tuple(t._key() for t in self.tasks))

    def __eq__(self, other):
        if not isinstance(other, InputDocument):
            return NotImplemented
        return self._key() == other._key()

    def __repr__(self):
        return "InputDocument(%d tasks)" % len(self.tasks)


def _ast_key(ast):
    """Position-free tuple form of an expression tree, for equality."""
    tag = ast[0]
    if tag in ("num", "name"):
        return (tag, ast[1])
    if tag == "neg":
        return ("neg", _ast_key(ast[1]))
    if tag == "pow":
        return ("pow", _ast_key(ast[1]), ast[2])
    return ("bin", ast[1], _ast_key(ast[2]), _ast_key(ast[3]))


def _payload_key(value):
    if isinstance(value, dict):
        return tuple((k, _payload_key(value[k])) for k in sorted(value))
    if isinstance(value, (list, tuple)):
        if isinstance(value, tuple) and value:
            if value[0] in ("num", "name", "neg", "pow", "bin"):
                return _ast_key(value)
            if value[0] == "gha":
                return ("gha", value[1])
        return tuple(_payload_key(v) for v in value)
    return value


# -------------------------------------------------------------------- parser

class _Parser:
    def __init__(self, toks):
        self.toks = toks
        self.pos = 0

    def peek(self):
        return self.toks[self.pos]

    def advance(self):
        tok = self.toks[self.pos]
        if tok[0] != "eof":
            self.pos += 1
        return tok

    def _found(self, tok):
        if tok[0] == "eof":
            return "end of input"
        if tok[0] == "string":
            return '"%s"' % tok[1]
        return repr(str(tok[1]))

    def fail(self, expected, tok=None):
        tok = tok or self.peek()
        raise InputSyntaxError(tok[2], tok[3], expected, self._found(tok))

    def expect_punct(self, ch):
        tok = self.peek()
        if tok[0] == "punct" and tok[1] == ch:
            return self.advance()
        self.fail("'%s'" % ch)

    def expect_ident(self, what="an identifier"):
        tok = self.peek()
        if tok[0] == "ident":
            return self.advance()
        self.fail(what)

    def expect_keyword(self, word):
        tok = self.peek()
        if tok[0] == "ident" and tok[1] == word:
            return self.advance()
        self.fail("'%s'" % word)

    def expect_uint(self, what="an unsigned integer"):
        tok = self.peek()
        if tok[0] == "uint":
            return self.advance()
        self.fail(what)

    def expect_string(self, what="a quoted string"):
        tok = self.peek()
        if tok[0] == "string":
            return self.advance()
        self.fail(what)

    def at_punct(self, ch):
        tok = self.peek()
        return tok[0] == "punct" and tok[1] == ch

    def at_ident(self, word=None):
        tok = self.peek()
        return tok[0] == "ident" and (word is None or tok[1] == word)

    # -- expressions ---------------------------------------------------------

    def parse_expr(self):
        node = self.parse_term()
        while self.at_punct("+") or self.at_punct("-"):
            op = self.advance()[1]
            node = ("bin", op, node, self.parse_term())
        return node

    def parse_term(self):
        node = self.parse_factor()
        while self.at_punct("*") or self.at_punct("/"):
            op = self.advance()[1]
            node = ("bin", op, node, self.parse_factor())
        return node

    def parse_factor(self):
        if self.at_punct("-"):
            self.advance()
            return ("neg", self.parse_factor())
        return self.parse_power()

    def parse_power(self):
        node = self.parse_atom()
        if self.at_punct("^"):
            self.advance()
            tok = self.expect_uint("an unsigned integer exponent")
            node = ("pow", node, tok[1])
        return node

    def parse_atom(self):
        tok = self.peek()
        if tok[0] == "uint":
            self.advance()
            return ("num", tok[1], (tok[2], tok[3]))
        if tok[0] == "ident":
            self.advance()
            return ("name", tok[1], (tok[2], tok[3]))
        if tok[0] == "punct" and tok[1] == "(":
            self.advance()
            node = self.parse_expr()
            self.expect_punct(")")
            return node
        self.fail("an expression")

    def parse_expr_eof(self):
        node = self.parse_expr()
        tok = self.peek()
        if tok[0] != "eof":
            self.fail("end of the expression", tok)
        return node

    # -- vectors and matrices --------------------------------------------------

    def parse_vector(self):
        self.expect_punct("(")
        items = [self.parse_expr()]
        while self.at_punct(","):
            self.advance()
            items.append(self.parse_expr())
        self.expect_punct(")")
        return items

    def parse_matrix(self):
        self.expect_punct("(")
        rows = [self.parse_vector()]
        while self.at_punct(","):
            self.advance()
            rows.append(self.parse_vector())
        self.expect_punct(")")
        return rows

    # -- tower block -----------------------------------------------------------

    def parse_tower(self):
        self.expect_keyword("tower")
        self.expect_punct("{")
        self.expect_keyword("p")
        p = self.expect_uint()[1]
        base = []
        if self.at_ident("base"):
            self.advance()
            if not self.at_ident():
                self.fail("a base variable name")
            while self.at_ident() and self.peek()[1] not in ("sep", "insep"):
                base.append(self.expect_ident()[1])
        sep_name = None
        minpoly = None
        autos = []
        if self.at_ident("sep"):
            self.advance()
            sep_name = self.expect_ident("a separable generator name")[1]
            self.expect_punct("{")
            self.expect_keyword("minpoly")
            minpoly = self._parse_string_expr()
            if self.at_ident("autos"):
                self.advance()
                self.expect_punct("{")
                while not self.at_punct("}"):
                    nm = self.expect_ident("an automorphism name")[1]
                    autos.append((nm, self._parse_string_expr()))
                self.expect_punct("}")
                if not autos:
                    self.fail("an automorphism name")
            self.expect_punct("}")
        insep = []
        while self.at_ident("insep"):
            self.advance()
            nm = self.expect_ident("an inseparable generator name")[1]
            self.expect_punct("{")
            self.expect_keyword("n")
            ntok = self.expect_uint()
            if ntok[1] < 1:
                raise InputSyntaxError(ntok[2], ntok[3],
                                       "an integer >= 1", str(ntok[1]))
            self.expect_keyword("value")
            value = self._parse_string_expr()
            self.expect_punct("}")
            insep.append((nm, ntok[1], value))
        self.expect_punct("}")
        return TowerDecl(p, base, sep_name, minpoly, autos, insep)

    def _parse_string_expr(self):
        tok = self.expect_string("a quoted expression")
        sub = _tokenize(tok[1], line=tok[2], col=tok[3] + 1)
        return _Parser(sub).parse_expr_eof()

    # -- task blocks -------------------------------------------------------------

    def parse_task(self):
        tok = self.expect_ident("a task kind")
        kind = tok[1]
        while self.at_punct("-"):
            self.advance()
            kind += "-" + self.expect_ident("a task kind")[1]
        if kind not in TASK_KINDS:
            raise InputSyntaxError(tok[2], tok[3], "a task kind",
                                   repr(kind))
        payload = self._parse_payload(kind)
        return TaskDecl(kind, payload, tok[2], tok[3])

    def _parse_payload(self, kind):
        self.expect_punct("{")
        payload = {}
        if kind in ("validate", "describe"):
            pass
        elif kind == "fixed-ring":
            if self.at_ident("gens"):
                self.advance()
                names = []
                while self.at_ident():
                    names.append(self.expect_ident()[1])
                if not names:
                    self.fail("a generator name")
                payload["gens"] = names
        elif kind == "apply":
            self.expect_keyword("map")
            tok = self.peek()
            if tok[0] == "string":
                self.advance()
                payload["map"] = ("gha", tok[1], tok[2], tok[3])
            else:
                payload["map"] = ("name",
                                  self.expect_ident("a map name")[1])
            self.expect_keyword("to")
            if self.at_punct("("):
                payload["target"] = ("vector", self.parse_vector())
            else:
                payload["target"] = ("scalar", self.parse_expr())
        elif kind in ("check-subspace", "deform-check"):
            self.expect_keyword("ambient")
            payload["ambient"] = self.expect_uint()[1]
            self.expect_keyword("basis")
            vectors = []
            while self.at_punct("("):
                vectors.append(self.parse_vector())
            payload["basis"] = vectors
        elif kind == "kform":
            self.expect_keyword("dim")
            payload["dim"] = self.expect_uint()[1]
            self.expect_keyword("rho")
            pairs = []
            while self.at_ident():
                nm = self.expect_ident()[1]
                pairs.append((nm, self.parse_matrix()))
            if not pairs:
                self.fail("a generator name")
            payload["rho"] = pairs
        elif kind == "check-ideal":
            self.expect_keyword("vars")
            names = []
            while self.at_ident() and self.peek()[1] != "gens":
                names.append(self.expect_ident()[1])
            if not names:
                self.fail("a variable name")
            payload["vars"] = names
            self.expect_keyword("gens")
            payload["gens"] = self.parse_vector()
        elif kind == "check-morphism":
            if self.at_ident("matrix"):
                self.advance()
                payload["matrix"] = self.parse_matrix()
            else:
                self.expect_keyword("vars")
                names = []
                while self.at_ident() and self.peek()[1] != "images":
                    names.append(self.expect_ident()[1])
                if not names:
                    self.fail("a variable name")
                payload["vars"] = names
                self.expect_keyword("images")
                payload["images"] = self.parse_vector()
        self.expect_punct("}")
        return payload

    def parse_document(self):
        decl = self.parse_tower()
        tasks = []
        while self.peek()[0] != "eof":
            tasks.append(self.parse_task())
        return InputDocument(decl, tasks)


def parse_input(text) -> InputDocument:
    """Parse a full document; raises InputSyntaxError with line/column."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    return _Parser(_tokenize(text)).parse_document()


def parse_expression(text, line=1, col=1):
    """Parse a single expression string into a tree."""
    return _Parser(_tokenize(text, line=line, col=col)).parse_expr_eof()


# ----------------------------------------------------------------- resolution

def _pow_value(env, x, n):
    acc = env.num(1)
    while n:
        if n & 1:
            acc = env.mul(acc, x)
        x = env.mul(x, x)
        n >>= 1
    return acc


def _eval(ast, env):
    tag = ast[0]
    if tag == "num":
        return env.num(ast[1])
    if tag == "name":
        return env.name(ast[1], ast[2])
    if tag == "neg":
        return -_eval(ast[1], env)
    if tag == "pow":
        return _pow_value(env, _eval(ast[1], env), ast[2])
    op = ast[1]
    a = _eval(ast[2], env)
    b = _eval(ast[3], env)
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return env.mul(a, b)
    return env.div(a, b)


def _unknown(s, pos, where):
    return ResolutionError("%d:%d: unknown identifier %r in %s"
                           % (pos[0], pos[1], s, where))


class _ScalarEnv:
    """Expressions over the base field K = F_p(t_1, ..., t_r)."""

    def __init__(self, ring: PolyRing):
        self.ring = ring

    def num(self, n):
        return self.ring.rat(n)

    def name(self, s, pos):
        if s in self.ring.variables:
            return self.ring.rat(self.ring.variable(s))
        if s == "X":
            raise ResolutionError(
                "%d:%d: X is only allowed in truncated-ring expressions"
                % pos)
        raise _unknown(s, pos, "a base-field expression")

    def mul(self, a, b):
        return a * b

    def div(self, a, b):
        return a / b


# _eval drives values through the dunder operators, so the univariate env
# wraps its ascending coefficient lists in a list subclass that carries them
class _UniValue(list):
    def __neg__(self):
        return _UniValue([-x for x in self])

    def __add__(self, other):
        out = list(self)
        for i, x in enumerate(other):
            if i < len(out):
                out[i] = out[i] + x
            else:
                out.append(x)
        while out and out[-1].is_zero():
            out.pop()
        return _UniValue(out)

    def __sub__(self, other):
        return self + (-other)


class _UniEnv:
    """Univariate polynomials in one formal root over K, as ascending
    coefficient lists; used for minimal polynomials and root images."""

    def __init__(self, ring: PolyRing, varname):
        self.ring = ring
        self.varname = varname
        self.scalars = _ScalarEnv(ring)

    def num(self, n):
        c = self.ring.rat(n)
        return _UniValue([] if c.is_zero() else [c])

    def name(self, s, pos):
        if s == self.varname:
            return _UniValue([self.ring.rat_zero, self.ring.rat_one])
        return _UniValue([self.scalars.name(s, pos)])

    def mul(self, a, b):
        if not a or not b:
            return _UniValue([])
        out = [self.ring.rat_zero] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
        while out and out[-1].is_zero():
            out.pop()
        return _UniValue(out)

    def div(self, a, b):
        if len(b) > 1:
            raise InputError(
                "division by a non-constant polynomial in a root expression")
        if not b:
            raise DivisionByZero("division by zero in a root expression")
        c = b[0]
        return _UniValue([x / c for x in a])


class _ElementEnv:
    """Expressions in L: base variables, tower generators, no X."""

    def __init__(self, spec: TowerSpec):
        self.spec = spec

    def num(self, n):
        return self.spec.scalar(n)

    def name(self, s, pos):
        if s in self.spec.generator_names():
            return self.spec.generator(s)
        if s in self.spec.ring.variables:
            return self.spec.scalar(self.spec.ring.rat(
                self.spec.ring.variable(s)))
        if s == "X":
            raise ResolutionError(
                "%d:%d: X is only allowed in truncated-ring expressions"
                % pos)
        raise _unknown(s, pos, "a field-element expression")

    def mul(self, a, b):
        return a * b

    def div(self, a, b):
        return a / b


class _TruncEnv:
    """Expressions in L[Xb]: everything in L plus the symbol X."""

    def __init__(self, spec: TowerSpec):
        self.spec = spec
        self.elements = _ElementEnv(spec)

    def num(self, n):
        return from_tower(self.spec.scalar(n))

    def name(self, s, pos):
        if s == "X":
            return xbar(self.spec)
        return from_tower(self.elements.name(s, pos))

    def mul(self, a, b):
        return a * b

    def div(self, a, b):
        return a * trunc_invert(b)


class _PolyEnv:
    """Expressions in L[x_1, ..., x_q]: algebra variables over L, no X."""

    def __init__(self, alg: PresentedAlgebraL):
        self.alg = alg
        self.elements = _ElementEnv(alg.spec)

    def num(self, n):
        return self.alg.constant(self.alg.spec.scalar(n))

    def name(self, s, pos):
        if s in self.alg.names:
            return self.alg.variable(s)
        return self.alg.constant(self.elements.name(s, pos))

    def mul(self, a, b):
        return a * b

    def div(self, a, b):
        zero_e = tuple(0 for _ in self.alg.names)
        if any(e != zero_e for e in b.coords):
            raise InputError(
                "division by a non-constant polynomial")
        c = b.coords.get(zero_e)
        if c is None:
            raise DivisionByZero("division by zero in a polynomial expression")
        return a * elt_inverse(c)


def eval_scalar(ring: PolyRing, ast):
    return _eval(ast, _ScalarEnv(ring))


def eval_unipoly(ring: PolyRing, varname, ast):
    """Ascending RatFunc coefficient list of a polynomial in varname."""
    return list(_eval(ast, _UniEnv(ring, varname)))


def eval_element(spec: TowerSpec, ast):
    return _eval(ast, _ElementEnv(spec))


def eval_trunc(spec: TowerSpec, ast):
    return _eval(ast, _TruncEnv(spec))


def eval_poly(alg: PresentedAlgebraL, ast):
    return _eval(ast, _PolyEnv(alg))


def build_spec(decl: TowerDecl, trust_irreducible=False) -> TowerSpec:
    """Resolve a tower declaration into a validated TowerSpec."""
    ring = PolyRing(decl.p, tuple(decl.base))
    minpoly = None
    autos = {}
    if decl.sep_name is not None:
        minpoly = eval_unipoly(ring, decl.sep_name, decl.minpoly)
        for nm, ast in decl.autos:
            if nm in autos:
                raise InputError("duplicate automorphism name: %s" % nm)
            autos[nm] = eval_unipoly(ring, decl.sep_name, ast)
    insep = []
    for nm, n, ast in decl.insep:
        insep.append((nm, n, eval_scalar(ring, ast)))
    return validate_tower(ring, decl.sep_name, minpoly, autos, insep,
                          trust_irreducible=trust_irreducible)


# ----------------------------------------------------------------- formatting

_PREC_ADD = 1
_PREC_MUL = 2
_PREC_NEG = 2
_PREC_POW = 3
_PREC_ATOM = 4


def _fmt(ast, minprec):
    tag = ast[0]
    if tag == "num":
        return str(ast[1])
    if tag == "name":
        return ast[1]
    if tag == "neg":
        s = "-" + _fmt(ast[1], _PREC_POW)
        return "(%s)" % s if minprec > _PREC_NEG else s
    if tag == "pow":
        return "%s^%d" % (_fmt(ast[1], _PREC_ATOM), ast[2])
    op = ast[1]
    prec = _PREC_ADD if op in "+-" else _PREC_MUL
    sep = " %s " % op if prec == _PREC_ADD else op
    s = _fmt(ast[2], prec) + sep + _fmt(ast[3], prec + 1)
    return "(%s)" % s if prec < minprec else s


def format_expr(ast) -> str:
    """Minimal-parenthesis canonical form of an expression tree."""
    return _fmt(ast, 0)


def _fmt_vector(items):
    return "(%s)" % ", ".join(format_expr(a) for a in items)


def _fmt_matrix(rows):
    return "(%s)" % ", ".join(_fmt_vector(r) for r in rows)


def format_document(doc: InputDocument) -> str:
    """Canonical re-emission; parse(format_document(parse(text))) is stable."""
    decl = doc.decl
    out = ["tower {"]
    out.append("  p %d" % decl.p)
    if decl.base:
        out.append("  base %s" % " ".join(decl.base))
    if decl.sep_name is not None:
        out.append("  sep %s {" % decl.sep_name)
        out.append('    minpoly "%s"' % format_expr(decl.minpoly))
        if decl.autos:
            out.append("    autos {")
            for nm, ast in decl.autos:
                out.append('      %s "%s"' % (nm, format_expr(ast)))
            out.append("    }")
        out.append("  }")
    for nm, n, ast in decl.insep:
        out.append('  insep %s { n %d value "%s" }' % (nm, n,
                                                       format_expr(ast)))
    out.append("}")
    for task in doc.tasks:
        out.append("")
        out.extend(_fmt_task(task))
    return "\n".join(out) + "\n"


def _fmt_task(task: TaskDecl):
    kind = task.kind
    payload = task.payload
    if kind in ("validate", "describe"):
        return ["%s {}" % kind]
    if kind == "fixed-ring":
        if "gens" in payload:
            return ["fixed-ring { gens %s }" % " ".join(payload["gens"])]
        return ["fixed-ring {}"]
    if kind == "apply":
        mp = payload["map"]
        ms = '"%s"' % mp[1] if mp[0] == "gha" else mp[1]
        tgt = payload["target"]
        ts = (_fmt_vector(tgt[1]) if tgt[0] == "vector"
              else format_expr(tgt[1]))
        return ["apply { map %s to %s }" % (ms, ts)]
    if kind in ("check-subspace", "deform-check"):
        lines = ["%s {" % kind, "  ambient %d" % payload["ambient"]]
        if payload["basis"]:
            lines.append("  basis %s" % " ".join(
                _fmt_vector(v) for v in payload["basis"]))
        else:
            lines.append("  basis")
        lines.append("}")
        return lines
    if kind == "kform":
        lines = ["kform {", "  dim %d" % payload["dim"], "  rho"]
        for nm, rows in payload["rho"]:
            lines.append("    %s %s" % (nm, _fmt_matrix(rows)))
        lines.append("}")
        return lines
    if kind == "check-ideal":
        return ["check-ideal { vars %s gens %s }"
                % (" ".join(payload["vars"]), _fmt_vector(payload["gens"]))]
    if kind == "check-morphism":
        if "matrix" in payload:
            return ["check-morphism { matrix %s }"
                    % _fmt_matrix(payload["matrix"])]
        return ["check-morphism { vars %s images %s }"
                % (" ".join(payload["vars"]), _fmt_vector(payload["images"]))]
    raise InputError("unknown task kind: %s" % kind)
