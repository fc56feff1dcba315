"""Command-line front end: verification suites, contact queries, graph and
split-map tooling.

Every report is deterministic: keys are sorted, all numbers are exact
integers or rationals rendered as p/q, and repeated runs on the same input
produce byte-identical output.  Exit status 0 means every requested check
passed, 1 flags a failed check, 2 malformed input, 3 an internal error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from . import combgraphs as cg
from . import contact as ct
from . import localmodel as lm
from .exactalg import (
    AlgebraHom,
    NodeRing,
    TruncatedAlgebra,
    element_from_json,
    series_from_json,
)


@dataclass
class RunConfig:
    command: str
    subcommand: str | None = None
    input_path: str | None = None
    out_path: str | None = None
    fmt: str = "json"
    n: int = 1
    l: int | None = None
    order: int | None = None
    trunc_base: int | None = None
    trunc_series: int | None = None
    max_r: int = 8
    threads: int = 1


class InputError(ValueError):
    pass


def _load(path):
    if path is None:
        raise InputError("this subcommand needs --input")
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as err:
        raise InputError("cannot read %s: %s" % (path, err))


def _emit(config, payload, text=None):
    if config.fmt == "text" and text is not None:
        body = text
    elif config.fmt == "dot" and isinstance(payload, str):
        body = payload
    else:
        body = json.dumps(payload, sort_keys=True, indent=2)
    if config.out_path:
        with open(config.out_path, "w", encoding="utf-8") as fh:
            fh.write(body + "\n")
    else:
        sys.stdout.write(body + "\n")


def _contact_data(config, data):
    try:
        algebra = TruncatedAlgebra.from_json(
            {
                **data["algebra"],
                "order": config.trunc_base or data["algebra"]["order"],
            }
        )
        ring = NodeRing(
            algebra, config.trunc_series or data.get("series_order", 8)
        )
        psi_t = element_from_json(algebra, data["psi_t"])
        phi1 = series_from_json(ring, data["phi_w1"])
        phi2 = series_from_json(ring, data["phi_w2"])
        return ct.ContactData(ring, psi_t, phi1, phi2, data.get("mode", ct.NODE))
    except (KeyError, ValueError) as err:
        raise InputError("bad contact input: %s" % err)


def _hom_from_json(source, spec):
    target = TruncatedAlgebra.from_json(spec["target"])
    images = [element_from_json(target, im) for im in spec["images"]]
    return AlgebraHom(source, target, images)


def _perm_name(sigma):
    if all(i == v for i, v in enumerate(sigma)):
        return "id"
    seen = set()
    cycles = []
    for start in range(len(sigma)):
        if start in seen:
            continue
        cyc = [start]
        seen.add(start)
        nxt = sigma[start]
        while nxt != start:
            cyc.append(nxt)
            seen.add(nxt)
            nxt = sigma[nxt]
        if len(cyc) > 1:
            cycles.append("(" + " ".join(str(c + 1) for c in cyc) + ")")
    return "".join(cycles)


def _report_payload(report):
    return report.to_json()


def run(config):
    """Dispatch a parsed configuration; returns the process exit status."""
    if config.command == "verify-atlas":
        atlas = lm.gamma_atlas(config.n)
        report = lm.verify_atlas(atlas, workers=config.threads)
        _emit(config, _report_payload(report))
        return 0 if report.passed else 1

    if config.command == "resolution-check":
        _, report = lm.verify_resolution()
        _emit(config, _report_payload(report))
        return 0 if report.passed else 1

    if config.command == "splice-check":
        ls = [config.l] if config.l else list(range(1, config.n + 2))
        payload = {}
        ok = True
        for l in ls:
            report = lm.splice_check(config.n, l)
            payload["l=%d" % l] = _report_payload(report)
            ok = ok and report.passed
        _emit(config, payload)
        return 0 if ok else 1

    if config.command == "contact":
        data = _load(config.input_path)
        cdata = _contact_data(config, data)
        order = config.order or data.get("order")
        if config.subcommand == "check":
            if order is None:
                order = ct.contact_orders(cdata)[0]
            report = ct.check_pure_contact(cdata, order)
            payload = {
                "pure": report.pure,
                "n": order,
                "left_order": report.left_order,
                "right_order": report.right_order,
            }
            if report.pure:
                payload["beta"] = report.beta.render()
                payload["epsilon"] = report.epsilon.render()
                payload["orientation"] = report.orientation
            else:
                payload["certificate"] = report.certificate
            _emit(config, payload)
            return 0 if report.pure else 1
        if config.subcommand == "ideal":
            if order is None:
                raise InputError("contact ideal needs --order")
            ideal = ct.predeformability_ideal(cdata, order)
            payload = {
                "n": order,
                "generators": [g.render() for g in ideal.generators],
                "generator_vectors": [g.to_json() for g in ideal.generators],
                "span_dimension": ideal.span.dim,
                "zero": ideal.is_zero(),
            }
            _emit(config, payload)
            return 0
        if config.subcommand == "universality":
            if order is None:
                raise InputError("contact universality needs --order")
            homs = [
                _hom_from_json(cdata.algebra, spec)
                for spec in data.get("homs", [])
            ]
            if not homs:
                raise InputError("universality needs a nonempty hom family")
            holds, results = ct.verify_universality(cdata, order, homs)
            payload = {
                "holds": holds,
                "cases": [
                    {"pure": pure, "ideal_killed": killed}
                    for _, pure, killed in results
                ],
            }
            _emit(config, payload)
            return 0 if holds else 1
        raise InputError("unknown contact subcommand")

    if config.command == "graphs":
        if config.subcommand == "enumerate":
            alpha = cg.TripleAlphabet(max_roots=min(config.max_r, 8))
            triples = cg.enumerate_triples(alpha)
            payload = {
                "count": len(triples),
                "by_roots": {},
            }
            for tr in triples:
                key = str(tr.num_roots)
                payload["by_roots"][key] = payload["by_roots"].get(key, 0) + 1
            _emit(config, payload)
            return 0
        data = _load(config.input_path)
        if config.subcommand == "validate":
            graph = cg.graph_from_json(data)
            payload = {
                "vertices": graph.num_vertices,
                "roots": graph.num_roots,
                "legs": graph.num_legs,
                "contact_defects": list(graph.contact_defects()),
                "contact_ok": graph.satisfies_contact(),
            }
            _emit(config, payload)
            return 0 if graph.satisfies_contact() else 1
        triple = cg.AdmissibleTriple(
            cg.graph_from_json(data["first"]),
            cg.graph_from_json(data["second"]),
            tuple(data.get("first_legs", [])),
        )
        if config.subcommand == "glue":
            glued, genus, degree, ttype = cg.glue(triple)
            if config.fmt == "dot":
                _emit(config, glued.to_dot())
                return 0
            payload = {
                "genus": genus,
                "degree": degree,
                "topological_type": {
                    "degree": ttype.degree,
                    "genus": ttype.genus,
                    "marks": ttype.marks,
                },
                "betti": glued.betti(),
                "edges": [[a, b, w] for a, b, w in glued.edges],
            }
            _emit(config, payload)
            return 0
        if config.subcommand == "eq-group":
            elements = cg.eq_group(triple, bound=config.max_r)
            payload = {
                "order": len(elements),
                "elements": sorted(_perm_name(s) for s in elements),
            }
            _emit(config, payload)
            return 0
        raise InputError("unknown graphs subcommand")

    if config.command == "maps":
        data = _load(config.input_path)
        sm = cg.split_map_from_json(data)
        if config.subcommand == "stability":
            payload = {
                "stable": sm.is_stable(),
                "oracle": sm.stability_oracle(),
                "weights": list(sm.weights()),
            }
            _emit(config, payload)
            return 0 if sm.is_stable() else 1
        if config.subcommand == "norm":
            t = sm.total_type()
            payload = {
                "type": {"degree": t.degree, "genus": t.genus, "marks": t.marks},
                "norm": t.norm(),
                "weights": list(sm.weights()),
                "identity_holds": sm.verify_norm_identity(),
            }
            _emit(config, payload)
            return 0 if sm.verify_norm_identity() else 1
        if config.subcommand == "decompose":
            if config.l is None:
                raise InputError("maps decompose needs --l")
            side1, side2, sigma = cg.decompose(sm, config.l)
            payload = {
                "interface_weights": list(sigma),
                "first": {
                    "groups": [
                        [[p.genus, p.degree, p.marks] for p in g]
                        for g in side1.groups
                    ],
                    "roots": [[mu, p] for mu, p in side1.roots],
                },
                "second": {
                    "groups": [
                        [[p.genus, p.degree, p.marks] for p in g]
                        for g in side2.groups
                    ],
                    "roots": [[mu, p] for mu, p in side2.roots],
                },
                "roundtrip": cg.glue_halves(side1, side2) == sm,
            }
            _emit(config, payload)
            return 0 if payload["roundtrip"] else 1
        raise InputError("unknown maps subcommand")

    raise InputError("unknown command %r" % config.command)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="degkit",
        description="exact verification toolkit for expanded-model charts, "
        "node-ring contact calculus, and gluing combinatorics",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_input=False):
        p.add_argument("--input", dest="input_path", default=None)
        p.add_argument("--out", dest="out_path", default=None)
        p.add_argument(
            "--format", dest="fmt", choices=("json", "text", "dot"), default="json"
        )
        p.add_argument("--trunc-base", type=int, default=None)
        p.add_argument("--trunc-series", type=int, default=None)
        p.add_argument("--max-r", type=int, default=8)
        p.add_argument("--order", type=int, default=None)
        p.add_argument("--n", type=int, default=1)
        p.add_argument("--l", type=int, default=None)

    for name in ("verify-atlas", "resolution-check", "splice-check"):
        common(sub.add_parser(name))
    for name, subs in (
        ("contact", ("check", "ideal", "universality")),
        ("graphs", ("validate", "glue", "eq-group", "enumerate")),
        ("maps", ("stability", "norm", "decompose")),
    ):
        p = sub.add_parser(name)
        p.add_argument("subcommand", choices=subs)
        common(p)
    return parser


def main(argv=None):
    parser = build_parser()
    ns = parser.parse_args(argv)
    threads = 1
    env = os.environ.get("DEGKIT_THREADS")
    if env:
        try:
            threads = max(1, int(env))
        except ValueError:
            threads = 1
    config = RunConfig(
        command=ns.command,
        subcommand=getattr(ns, "subcommand", None),
        input_path=ns.input_path,
        out_path=ns.out_path,
        fmt=ns.fmt,
        n=ns.n,
        l=ns.l,
        order=ns.order,
        trunc_base=ns.trunc_base,
        trunc_series=ns.trunc_series,
        max_r=ns.max_r,
        threads=threads,
    )
    try:
        return run(config)
    except (InputError, ct.ContactError, cg.GraphError, cg.SplitMapError) as err:
        sys.stderr.write("error: %s\n" % err)
        return 2
    except (KeyError, TypeError, ValueError) as err:
        sys.stderr.write("error: malformed input (%s)\n" % err)
        return 2
    except Exception as err:  # pragma: no cover - internal invariant breach
        sys.stderr.write("internal error: %s\n" % err)
        return 3


if __name__ == "__main__":
    sys.exit(main())
