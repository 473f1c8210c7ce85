"""Command-line front end: ``h2net {table,spectrum,stability,reduce,lure}``.

Exit codes: 0 success, 1 usage error, 2 computation error.
"""
import argparse
import contextlib
import io
import sys

from .coupling import CouplingKind, coupling_matrix, coupling_spectrum, predicted_spectrum
from .errors import H2NetError
from .h2 import h2_norm
from .lure import (
    LureConfig,
    error_signal,
    format_decimal,
    linearized_output_energy,
    output_error,
    simulate,
    write_csv,
)
from .network import IoShape, assemble, reduce_constructed, stable_by_coupling_spectrum
from .nodefile import load_node, parse_matrix_file
from .tables import DEFAULT_N_LIST, TableSpec, run_table

PRECISION_DIGITS = {"table": 6, "full": 12}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _int_list(text):
    try:
        vals = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated integer list: {text!r}")
    if not vals or min(vals) < 1:
        raise argparse.ArgumentTypeError("sizes must be positive integers")
    return vals


def _float_list(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated number list: {text!r}")


def _coupling(args):
    """(kind, gamma) from --coupling / --n."""
    spec = args.coupling
    if spec.startswith("custom:"):
        gamma = parse_matrix_file(spec[len("custom:"):])
        if args.n is not None and args.n != gamma.shape[0]:
            raise UsageError(f"--n {args.n} does not match the {gamma.shape[0]}x{gamma.shape[0]} custom coupling")
        return CouplingKind.CUSTOM, gamma
    try:
        kind = CouplingKind(spec)
    except ValueError:
        raise UsageError(f"unknown coupling {spec!r}") from None
    if kind is CouplingKind.CUSTOM:
        raise UsageError("use custom:<path> for a custom coupling")
    if args.n is None:
        raise UsageError("--n is required for generated couplings")
    return kind, coupling_matrix(kind, args.n)


def _fmt(value, precision):
    return format_decimal(value, PRECISION_DIGITS[precision])


def _fmt_complex(z, precision):
    tiny = 1e-12 * max(1.0, abs(z))
    re = 0.0 if abs(z.real) <= tiny else z.real
    if abs(z.imag) <= tiny:
        return _fmt(re, precision)
    sign = "+" if z.imag >= 0 else "-"
    return f"{_fmt(re, precision)}{sign}{_fmt(abs(z.imag), precision)}j"


def cmd_table(args, out):
    spec = TableSpec(args.table, "ex1", tuple(args.n_list or DEFAULT_N_LIST), args.io)
    rows = run_table(spec, node=load_node(args.node))
    out.write("N,h2_norm,status\n")
    for row in rows:
        norm = "" if row.norm is None else _fmt(row.norm, args.precision)
        out.write(f"{row.n},{norm},{row.status}\n")


def cmd_spectrum(args, out):
    kind, gamma = _coupling(args)
    if args.predicted:
        spec = predicted_spectrum(kind, gamma.shape[0])
    else:
        spec = coupling_spectrum(gamma)
    out.write(",".join(_fmt_complex(z, args.precision) for z in spec.sorted()) + "\n")


def cmd_stability(args, out):
    _, gamma = _coupling(args)
    node = load_node(args.node)
    out.write("stable\n" if stable_by_coupling_spectrum(node, gamma) else "unstable\n")


def cmd_reduce(args, out):
    node = load_node(args.node)
    sizes = args.n_list or ([args.n] if args.n else None)
    if not sizes:
        raise UsageError("reduce needs --n or --n-list")
    out.write("N,h2_full,h2_reduced,rel_diff\n")
    for n in sizes:
        full = h2_norm(assemble(node, coupling_matrix(CouplingKind.CONSTRUCTED, n), IoShape.COLUMN_ROW)).norm
        red = h2_norm(reduce_constructed(node, n)).norm
        rel = abs(full - red) / full if full else 0.0
        out.write(
            f"{n},{_fmt(full, args.precision)},{_fmt(red, args.precision)},{rel:.3e}\n"
        )


def cmd_lure(args, out):
    kind, gamma = _coupling(args)
    node = load_node(args.node)
    coupling = gamma if kind is CouplingKind.CUSTOM else kind
    scales = args.scales
    if not 1 <= len(scales) <= 2:
        raise UsageError("--scales takes one or two values")
    cfgs = [
        LureConfig(node, coupling, gamma.shape[0], s, args.dt, args.t_end) for s in scales
    ]
    trajs = [simulate(cfg) for cfg in cfgs]
    digits = PRECISION_DIGITS["full"]
    if len(trajs) == 2:
        err = error_signal(trajs[0], trajs[1])
        cols = [trajs[0].times, trajs[0].z_values, trajs[1].z_values, err]
        header = ["t", "z", "z_perturbed", "err"]
    else:
        cols = [trajs[0].times, trajs[0].z_values]
        header = ["t", "z"]
    write_csv(out, cols, header, stride=args.stride, digits=digits)
    summary = []
    if len(trajs) == 2:
        summary.append(f"l2_error={format_decimal(output_error(*trajs), digits)}")
    try:
        energy = linearized_output_energy(cfgs[0])
        summary.append(f"linearized_energy={format_decimal(energy, digits)}")
    except H2NetError:
        summary.append("linearized_energy=unstable")
    return summary


def build_parser():
    parser = _Parser(prog="h2net", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, node_default=None, coupling=False):
        p.add_argument("--out", help="write CSV here instead of stdout")
        p.add_argument("--precision", choices=sorted(PRECISION_DIGITS), default="table")
        if node_default is not False:
            p.add_argument("--node", default=node_default, required=node_default is None,
                           help="node-system file, or ex1 / ex2")
        if coupling:
            p.add_argument("--coupling", required=True,
                           help="constructed | diffusive | antisym | custom:<path>")
            p.add_argument("--n", type=int)

    p = sub.add_parser("table", help="H2 norms over network sizes for table layouts 1-5")
    common(p, node_default="ex1")
    p.add_argument("--table", type=int, choices=range(1, 6), required=True)
    p.add_argument("--n-list", type=_int_list)
    p.add_argument("--io", choices=[s.value for s in IoShape],
                   help="override the table's I/O shape")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("spectrum", help="eigenvalues of a coupling matrix")
    common(p, node_default=False, coupling=True)
    p.add_argument("--predicted", action="store_true", help="closed-form spectrum instead")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("stability", help="stability verdict via the coupling spectrum")
    common(p, coupling=True)
    p.set_defaults(func=cmd_stability)

    p = sub.add_parser("reduce", help="full vs reduced H2 norm for the constructed coupling")
    common(p)
    p.add_argument("--n", type=int)
    p.add_argument("--n-list", type=_int_list)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("lure", help="simulate the Lur'e network")
    common(p, node_default="ex2", coupling=True)
    p.add_argument("--scales", type=_float_list, default=[1.0, 0.95])
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--t-end", type=float, default=10.0)
    p.add_argument("--stride", type=int, default=1, help="emit every k-th CSV row")
    p.set_defaults(func=cmd_lure)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    buf = io.StringIO()
    try:
        summary = args.func(args, buf) or []
    except UsageError as exc:
        print(f"h2net: error: {exc}", file=sys.stderr)
        return 1
    except (H2NetError, ValueError, OSError) as exc:
        print(f"h2net: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(buf.getvalue())
        for line in summary:
            print(line)
    else:
        sys.stdout.write(buf.getvalue())
        for line in summary:
            print(line, file=sys.stderr)
    return 0


if __name__ == "__main__":
    with contextlib.suppress(BrokenPipeError):
        sys.exit(main())
