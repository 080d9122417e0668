"""Command-line front end: parameter derivation, batch feasibility screening,
embedding runs, case-study execution, and construction dumps.

Exit codes: 0 success, 2 parse error, 3 infeasible input, 4 case-study
mismatch, 70 internal invariant failure.
"""

import argparse
import sys

from .params import (ParameterArray, recover_from_parameter_array,
                     compute_eigendata, compute_krein,
                     InfeasibleArrayError, NotQuotientPolynomialError)
from .exactalg import FieldMismatchError
from .imprim import find_imprimitivity_sets
from .feas import run_all, krein_signs
from .schemes import (NotAssociationSchemeError, read_relation_matrix,
                      write_relation_matrix, tensor_from_relation_matrix)
from .embed import (gram_from_candidate, compute_embedding, ip_table_for,
                    select_eigenspace, format_entry)
from . import families
from .studies import CaseMismatchError, run_case, list_cases, CASE_IDS

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_INFEASIBLE = 3
EXIT_CASE_MISMATCH = 4
EXIT_INTERNAL = 70


class ParameterParseError(ValueError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


def parse_parameter_array(s):
    """ParameterArray from "[[k_1, .., k_d], [block; block; ..]]" text."""
    pos = 0

    def skip():
        nonlocal pos
        while pos < len(s) and s[pos].isspace():
            pos += 1

    def expect(ch):
        nonlocal pos
        skip()
        if pos >= len(s) or s[pos] != ch:
            raise ParameterParseError(f"expected {ch!r}", pos)
        pos += 1

    def peek():
        skip()
        return s[pos] if pos < len(s) else ""

    def integer():
        nonlocal pos
        skip()
        start = pos
        while pos < len(s) and s[pos].isdigit():
            pos += 1
        if pos == start:
            raise ParameterParseError("expected integer", start)
        return int(s[start:pos])

    def int_list():
        nonlocal pos
        vals = [integer()]
        while peek() == ",":
            pos += 1
            vals.append(integer())
        return tuple(vals)

    expect("[")
    expect("[")
    valencies = int_list()
    expect("]")
    expect(",")
    expect("[")
    blocks = []
    if peek() != "]":
        blocks.append(int_list())
        while peek() == ";":
            pos += 1
            blocks.append(int_list())
    expect("]")
    expect("]")
    skip()
    if pos != len(s):
        raise ParameterParseError("trailing text", pos)
    try:
        return ParameterArray(valencies, tuple(blocks))
    except ValueError as err:
        raise ParameterParseError(str(err), len(s)) from err


def read_array_file(path):
    """Arrays from a batch file: one per line, '#' lines and blanks skipped."""
    out = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            try:
                out.append(parse_parameter_array(text))
            except ParameterParseError as err:
                raise ParameterParseError(
                    f"{path}:{lineno}: {err}", err.position) from err
    return out


def _emit(lines, out=sys.stdout):
    for line in lines:
        out.write(line + "\n")


def _render_value(v):
    if v.is_rational():
        q = v.as_rational()
        return str(q)
    return v.render()


def _params_lines(arr, fmt):
    t = recover_from_parameter_array(arr)
    e = compute_eigendata(t)
    structures = find_imprimitivity_sets(t, e)
    d = t.d
    if fmt == "machine":
        lines = [f"array\t{arr.render()}", f"order\t{t.n}", f"classes\t{d}"]
        for h in range(d + 1):
            for i in range(d + 1):
                lines.append("p\t{}\t{}\t{}".format(
                    h, i, "\t".join(str(t.p[h][i][j]) for j in range(d + 1))))
        for j in range(d + 1):
            lines.append("P\t{}\t{}".format(
                j, "\t".join(_render_value(v) for v in e.P[j])))
        for i in range(d + 1):
            lines.append("Q\t{}\t{}".format(
                i, "\t".join(_render_value(v) for v in e.Q[i])))
        lines.append("m\t" + "\t".join(
            str(v) if v is not None else _render_value(e.m[j])
            for j, v in enumerate(e.m_int)))
        signs = krein_signs(e)
        for h in range(d + 1):
            for i in range(d + 1):
                lines.append("krein_sign\t{}\t{}\t{}".format(
                    h, i, "\t".join(str(signs[(h, i, j)])
                                    for j in range(d + 1))))
        for st in structures:
            if st.nontrivial:
                lines.append("imprimitivity\t{}\t{}".format(
                    ",".join(str(i) for i in sorted(st.tilde0)),
                    ",".join(str(i) for i in sorted(st.overline0))))
        return lines
    lines = [f"array: {arr.render()}", f"order: {t.n}", f"classes: {d}",
             "valencies: " + ", ".join(str(v) for v in t.k)]
    lines.append("eigenmatrix P (rows = eigenspaces):")
    for j in range(d + 1):
        lines.append("  " + "\t".join(_render_value(v) for v in e.P[j]))
    lines.append("dual eigenmatrix Q:")
    for i in range(d + 1):
        lines.append("  " + "\t".join(_render_value(v) for v in e.Q[i]))
    lines.append("multiplicities: " + ", ".join(
        str(v) if v is not None else _render_value(e.m[j])
        for j, v in enumerate(e.m_int)))
    try:
        kt = compute_krein(e)
        lines.append("Krein parameters q^h_ij:")
        for h in range(d + 1):
            for i in range(d + 1):
                lines.append("  q^{}_{}: ".format(h, i) + "\t".join(
                    _render_value(kt.q[h][i][j]) for j in range(d + 1)))
    except FieldMismatchError:
        signs = krein_signs(e)
        lines.append("Krein parameter signs (values span conjugate fields):")
        for h in range(d + 1):
            for i in range(d + 1):
                lines.append("  q^{}_{}: ".format(h, i) + "\t".join(
                    str(signs[(h, i, j)]) for j in range(d + 1)))
    nontrivial = [st for st in structures if st.nontrivial]
    if nontrivial:
        for st in nontrivial:
            lines.append(
                "imprimitivity: closed set {{{}}}, quotient support {{{}}}, "
                "block size {}, blocks {}".format(
                    ", ".join(str(i) for i in sorted(st.tilde0)),
                    ", ".join(str(i) for i in sorted(st.overline0)),
                    st.n_bar, st.n_tilde))
    else:
        lines.append("imprimitivity: none (primitive)")
    return lines


def cmd_params(args):
    arr = parse_parameter_array(args.array)
    _emit(_params_lines(arr, args.format))
    return EXIT_OK


def cmd_feas(args):
    if args.input.lstrip().startswith("["):
        arrays = [parse_parameter_array(args.input)]
    else:
        arrays = read_array_file(args.input)
    reports = [run_all(a) for a in arrays]
    if args.format == "machine":
        _emit(r.machine_line() for r in reports)
    else:
        for i, r in enumerate(reports):
            if i:
                _emit([""])
            _emit(r.text_lines())
    if any(r.infeasible for r in reports):
        return EXIT_INFEASIBLE
    return EXIT_OK


def cmd_embed(args):
    r = read_relation_matrix(args.matrix)
    t = tensor_from_relation_matrix(r)
    e = compute_eigendata(t)
    if args.eigenspace is not None:
        js = [args.eigenspace]
    else:
        structures = [s for s in find_imprimitivity_sets(t, e) if s.nontrivial]
        if not structures:
            raise InfeasibleArrayError(
                "no imprimitivity structure; pick --eigenspace explicitly")
        js = select_eigenspace(t, structures[0], args.ratio_bound, e)
        if not js:
            raise InfeasibleArrayError(
                f"no eigenspace within ratio bound {args.ratio_bound}")
        js = js[:1]
    j = js[0]
    if not 1 <= j <= t.d:
        raise ParameterParseError(f"eigenspace index {j} out of range", 0)
    g = gram_from_candidate(r, e, j)
    u = compute_embedding(g)
    table = ip_table_for(e, j)
    if args.format == "machine":
        head = [f"eigenspace\t{j}", f"dimension\t{e.m_int[j]}",
                "table\t" + "\t".join(_render_value(v) for v in table)]
    else:
        head = [f"eigenspace: {j}", f"dimension: {e.m_int[j]}",
                "inner products by relation: "
                + ", ".join(_render_value(v) for v in table)]
    _emit(head)
    if not u:
        _emit([f"embedding failed: {u.reason} at row {u.row}"])
        return EXIT_INFEASIBLE
    _emit(u.dump_lines())
    return EXIT_OK


def cmd_case(args):
    if args.list:
        for c in list_cases():
            stages = ";".join(f"{n}:{cand}:{surv}"
                              for n, cand, surv in (c.stages or ()))
            v = c.verdict
            if c.automorphisms is not None:
                v += f" automorphisms={c.automorphisms}"
            if args.format == "machine":
                _emit(["\t".join([c.case_id, stages, c.verdict,
                                  str(c.automorphisms or "")])])
            else:
                _emit([f"{c.case_id}: {v}" + (f" [{stages}]" if stages else "")])
        return EXIT_OK
    if args.case_id is None:
        raise ParameterParseError("case id required (or --list)", 0)
    if args.case_id not in CASE_IDS:
        raise ParameterParseError(f"unknown case {args.case_id!r}", 0)
    if args.cache:
        from .studies import _cases
        _cases._CENSUS_FILE = args.cache
    tr = run_case(args.case_id, jobs=args.jobs,
                  use_cache=not args.allow_slow_generation)
    if args.format == "machine":
        _emit([tr.machine_line()])
    else:
        _emit(tr.text_lines())
    return EXIT_OK


def cmd_construct(args):
    if args.args:
        sv = families.named_scheme(args.name, *[int(a) for a in args.args])
    else:
        try:
            sv = families.special_scheme(args.name)
        except ValueError:
            sv = families.named_scheme(args.name)
    r = sv.relation_matrix()
    if args.output:
        write_relation_matrix(r, args.output)
        _emit([f"wrote {sv.tag}: order {r.n}, {r.d} classes -> {args.output}"])
    else:
        _emit([f"{r.n} {r.d}"])
        _emit(" ".join(str(int(v)) for v in row) for row in r.M)
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(
        prog="schemekit",
        description="exact computations with association scheme parameters")
    p.add_argument("--format", choices=("text", "machine"), default="text")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("params",
                        help="derive tensor, eigenmatrices, Krein parameters "
                             "and imprimitivity from a parameter array")
    sp.add_argument("array", help='e.g. "[[12, 4, 4, 24], [6, 0, 3; 0, 1; 2]]"')
    sp.set_defaults(fn=cmd_params)

    sf = sub.add_parser("feas",
                        help="feasibility battery over an inline array or a "
                             "batch file (one array per line, # comments)")
    sf.add_argument("input")
    sf.set_defaults(fn=cmd_feas)

    se = sub.add_parser("embed",
                        help="eigenspace embedding of a relation-matrix file")
    se.add_argument("matrix")
    se.add_argument("--eigenspace", type=int, default=None)
    se.add_argument("--ratio-bound", type=int, default=2)
    se.set_defaults(fn=cmd_embed)

    sc = sub.add_parser("case", help="run a catalogued case study")
    sc.add_argument("case_id", nargs="?", default=None)
    sc.add_argument("--list", action="store_true",
                    help="list case ids with pinned expectations")
    sc.add_argument("--jobs", type=int, default=1)
    sc.add_argument("--cache", default=None,
                    help="override the bipartite-census cache file")
    sc.add_argument("--allow-slow-generation", action="store_true",
                    help="regenerate cached censuses instead of reading them")
    sc.set_defaults(fn=cmd_case)

    sg = sub.add_parser("construct",
                        help="build a named scheme and dump its relation "
                             "matrix")
    sg.add_argument("name", help="K/Z/C/J/H/Cyc or a special-scheme name")
    sg.add_argument("args", nargs="*", help="family parameters, e.g. H 3 2")
    sg.add_argument("--output", "-o", default=None)
    sg.set_defaults(fn=cmd_construct)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        # argparse exits 2 on bad usage, which matches the parse-error code
        return int(err.code or 0)
    try:
        return args.fn(args)
    except ParameterParseError as err:
        print(f"parse error: {err}", file=sys.stderr)
        return EXIT_PARSE
    except (InfeasibleArrayError, NotQuotientPolynomialError,
            NotAssociationSchemeError, FileNotFoundError, ValueError) as err:
        print(f"infeasible input: {err}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except CaseMismatchError as err:
        print(f"case mismatch: {err}", file=sys.stderr)
        return EXIT_CASE_MISMATCH
    except Exception as err:  # noqa: BLE001 - map to the internal exit code
        print(f"internal error: {type(err).__name__}: {err}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
