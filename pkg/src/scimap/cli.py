"""Command-line front end.

One corpus file is the interchange hub: ``ingest`` parses export files
once, every analysis command then reads the corpus and writes delimited
artifacts into the output directory.  Every artifact carries a header
block (engine version, config hash, corpus provenance, seed when
randomized) and every command is a pure function of (inputs, config,
seed): identical invocations produce byte-identical artifact trees.

Exit codes: 0 success, 1 data error, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Optional

from . import ENGINE_VERSION
from .amortize import amortize, amortized_h_index, h_index, resolve_amortized_ties
from .centrality import betweenness, pagerank
from .community import walktrap
from .corpus import coverage_report, dedupe_and_screen, load_corpus, save_corpus
from .graphio import read_graph, write_graph
from .graphs import (
    cocitation_graph, collaboration_graph, cooccurrence_graph, historiograph,
    match_local_citations, rpys, three_field_flow,
)
from .metrics import (
    annual_production, author_document_counts, bradford_zones,
    collaboration_indices, descriptive_summary, lotka_fit,
    mean_citation_per_elapsed_years, method_occurrence, source_article_counts,
    term_frequencies, trending_terms,
)
from .normalize import to_document
from .parsing import ExportParseError, parse_bibtex_export, parse_plaintext_export
from .records import Corpus, MAX_PLAUSIBLE_YEAR
from .tables import config_hash, fmt, write_table
from .themes import thematic_evolution
from .mfas import Multigraph, calibration_harness, solve


class DataError(Exception):
    """User-facing data problem: reported on stderr with exit status 1."""


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        config = _resolve_config(args)
        args.handler(args, config)
    except (DataError, ExportParseError, ValueError, OSError) as exc:
        print(f"scimap: error: {exc}", file=sys.stderr)
        return 1
    return 0


def _resolve_config(args: argparse.Namespace) -> dict:
    """Flags > config file > environment (output dir) > defaults."""
    file_config = {}
    config_path = getattr(args, "config", None)
    if config_path:
        try:
            file_config = json.loads(Path(config_path).read_text("utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise DataError(f"cannot read config: {exc}")
        if not isinstance(file_config, dict):
            raise DataError("config file must hold a JSON object")
    for key, value in file_config.items():
        attr = key.replace("-", "_")
        if getattr(args, attr, None) is None and hasattr(args, attr):
            setattr(args, attr, value)
    if getattr(args, "out", None) is None:
        args.out = os.environ.get("SCIMAP_OUT", ".")
    # The hash covers analysis parameters; filesystem locations are
    # incidental (input identity is carried by provenance/basename meta).
    path_keys = {"handler", "config", "out", "corpus", "output", "inputs",
                 "graph", "table", "lexicon", "niches", "retracted"}
    resolved = {key: value for key, value in sorted(vars(args).items())
                if key not in path_keys and value is not None}
    resolved["engine"] = ENGINE_VERSION
    for key in ("inputs", "graph", "table", "lexicon", "niches"):
        value = getattr(args, key, None)
        if value is not None:
            names = [Path(v).name for v in value] \
                if isinstance(value, list) else [Path(value).name]
            resolved[key] = ";".join(names)
    return resolved


def _meta(config: dict, corpus: Optional[Corpus] = None, **extra) -> dict:
    meta = {"command": config.get("command", ""),
            "config": config_hash(config)}
    if corpus is not None:
        meta["corpus"] = ";".join(corpus.provenance) or "unknown"
        meta["reference-year"] = corpus.reference_year
    meta.update(extra)
    return meta


def _outdir(args) -> Path:
    path = Path(args.out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _load(args) -> Corpus:
    try:
        return load_corpus(args.corpus)
    except FileNotFoundError:
        raise DataError(f"corpus file not found: {args.corpus}")


def _require_seed(args, config: dict) -> int:
    """Randomized commands must replay: synthesize and echo when absent."""
    if args.seed is None:
        args.seed = int.from_bytes(os.urandom(8), "big")
        config["seed"] = args.seed
        print(f"scimap: synthesized seed {args.seed}", file=sys.stderr)
    return args.seed


# Command handlers -----------------------------------------------------------

def cmd_ingest(args, config):
    documents = []
    provenance = []
    for name in args.inputs:
        data = Path(name).read_bytes()
        provenance.append(Path(name).name)
        if args.format == "bibtex":
            records = parse_bibtex_export(data, source_file=Path(name).name,
                                          reference_separator=args.cr_separator)
        else:
            records = parse_plaintext_export(data, source_file=Path(name).name)
        year_cap = args.reference_year or MAX_PLAUSIBLE_YEAR
        documents.extend(to_document(r, year_cap) for r in records)
    retracted = set()
    if args.retracted:
        retracted = {line.strip() for line in
                     Path(args.retracted).read_text("utf-8").splitlines()
                     if line.strip()}
    corpus = dedupe_and_screen(documents, retracted=retracted,
                               reference_year=args.reference_year,
                               provenance=provenance)
    out = Path(args.output)
    save_corpus(corpus, out)
    rows = [(e.removed_id, e.reason, e.kept_id, e.detail)
            for e in corpus.screening]
    write_table(rows, ["removed_id", "reason", "kept_id", "detail"],
                out.with_suffix(".screening.csv"), _meta(config, corpus))
    print(f"corpus: {len(corpus)} documents "
          f"({len(corpus.screening)} screened out) -> {out}")


def cmd_coverage(args, config):
    corpus = _load(args)
    report = coverage_report(corpus)
    rows = [(r.tag, r.description, r.missing_count, fmt(r.missing_pct), r.label)
            for r in report.rows]
    write_table(rows, ["key", "description", "missing_count", "missing_pct",
                       "label"], _outdir(args) / "coverage.csv",
                _meta(config, corpus))


def cmd_stats(args, config):
    corpus = _load(args)
    stats = descriptive_summary(corpus)
    growth = "" if stats.annual_growth_rate_pct is None \
        else fmt(stats.annual_growth_rate_pct)
    rows = [
        ("timespan", f"{stats.first_year}-{stats.last_year}"),
        ("sources", stats.sources),
        ("documents", stats.documents),
        ("annual_growth_rate_pct", growth),
        ("document_average_age", fmt(stats.document_average_age)),
        ("average_citations", fmt(stats.average_citations)),
        ("references", stats.total_references),
        ("author_keywords", stats.author_keywords),
        ("keywords_plus", stats.keywords_plus),
        ("authors", stats.authors),
        ("single_document_authors", stats.single_document_authors),
        ("single_authored_documents", stats.single_authored_documents),
        ("coauthors_per_document", fmt(stats.coauthors_per_document)),
        ("international_coauthorship_pct", fmt(stats.international_coauthorship_pct)),
    ]
    production = annual_production(corpus)
    write_table(rows, ["metric", "value"], _outdir(args) / "stats.csv",
                _meta(config, corpus))
    write_table([(y, int(v)) for y, v in production.points],
                ["year", "documents"], _outdir(args) / "annual_production.csv",
                _meta(config, corpus, undated=production.undated))
    citations = mean_citation_per_elapsed_years(corpus)
    write_table([(y, fmt(float(v))) for y, v in citations],
                ["year", "mean_citation_per_elapsed_years"],
                _outdir(args) / "citation_per_elapsed_years.csv",
                _meta(config, corpus))


def cmd_bradford(args, config):
    corpus = _load(args)
    counts = source_article_counts(corpus)
    zones = bradford_zones(counts)
    source_rows = []
    for zone in zones:
        for (source, count), cumulative in zip(zone.sources, zone.cumulative):
            source_rows.append((zone.zone_index, source, count, cumulative))
    write_table(source_rows, ["zone", "source", "articles", "cumulative"],
                _outdir(args) / "bradford_sources.csv", _meta(config, corpus))
    zone_rows = [(z.zone_index, len(z.sources),
                  sum(c for _, c in z.sources), fmt(z.source_share_pct),
                  fmt(z.article_share_pct)) for z in zones]
    write_table(zone_rows, ["zone", "sources", "articles", "source_share_pct",
                            "article_share_pct"],
                _outdir(args) / "bradford_zones.csv", _meta(config, corpus))


def cmd_lotka(args, config):
    corpus = _load(args)
    fit = lotka_fit(author_document_counts(corpus))
    rows = [(n, fit.observed[n], fmt(fit.predicted[n]))
            for n in sorted(fit.observed)]
    write_table(rows, ["documents", "observed_authors", "predicted_authors"],
                _outdir(args) / "lotka.csv",
                _meta(config, corpus, baseline=fit.baseline_authors))


def cmd_hindex(args, config):
    corpus = _load(args)
    groups: dict[str, list] = {}
    for doc in corpus.documents:
        if args.level == "source":
            keys = [doc.source] if doc.source else []
        else:
            keys = set(doc.authors)
        for key in keys:
            groups.setdefault(key, []).append(doc)
    plain = []
    for entity in sorted(groups):
        docs = groups[entity]
        years = [d.pub_year for d in docs if d.pub_year is not None]
        plain.append((entity, h_index([d.total_citations for d in docs]),
                      min(years) if years else None))
    if not args.amortized:
        rows = sorted(((e, h) for e, h, _ in plain), key=lambda r: (-r[1], r[0]))
        write_table(rows, ["entity", "h_index"],
                    _outdir(args) / f"hindex_{args.level}.csv",
                    _meta(config, corpus))
        return
    dated = [(e, h, y) for e, h, y in plain if y is not None]
    if not dated:
        raise DataError("amortized h-index needs dated documents")
    items = amortized_h_index(dated, corpus.reference_year)
    if args.resolve_ties:
        items, decrements = resolve_amortized_ties(items)
    rows = [(item.id, item.h, item.first_year, item.citable_years,
             fmt(float(item.normalized_ps), 4), fmt(float(item.amortized), 4),
             item.tie_flag or "") for item in items]
    write_table(rows, ["entity", "h_index", "first_year", "citable_years",
                       "normalized_ps", "amortized", "flag"],
                _outdir(args) / f"hindex_{args.level}_amortized.csv",
                _meta(config, corpus))


def cmd_amortize(args, config):
    rows_in = []
    lines = Path(args.table).read_text("utf-8").splitlines()
    for line in lines:
        line = line.strip()
        if not line or line.startswith("#") or line.lower().startswith("year"):
            continue
        year_text, metric_text = [part.strip() for part in line.split(",")[:2]]
        rows_in.append((int(year_text), float(metric_text)))
    if not rows_in:
        raise DataError(f"no (year, metric) rows in {args.table}")
    reference_year = args.reference_year or max(year for year, _ in rows_in)
    rows = amortize(rows_in, reference_year, display_scale=args.display_scale)
    out_rows = [(r.year, fmt(float(r.metric), 4), r.citable_years,
                 fmt(float(r.pondering_scalar), 4),
                 fmt(float(r.normalized_ps), 4), fmt(float(r.amortized), 4),
                 fmt(float(r.display), 4)) for r in rows]
    write_table(out_rows, ["year", "metric", "citable_years",
                           "pondering_scalar", "normalized_ps", "amortized",
                           "display"],
                _outdir(args) / "amortized.csv",
                _meta(config, **{"reference-year": reference_year}))


def cmd_terms(args, config):
    corpus = _load(args)
    stats = term_frequencies(corpus, args.field, top_n=args.top_n)
    write_table([(s.term, s.frequency) for s in stats], ["term", "frequency"],
                _outdir(args) / "terms.csv", _meta(config, corpus))


def cmd_trending(args, config):
    corpus = _load(args)
    stats = trending_terms(corpus, min_freq=args.min_freq,
                           max_per_year=args.max_per_year)
    rows = [(s.term, s.frequency, s.q1_year, s.median_year, s.q3_year)
            for s in stats]
    write_table(rows, ["term", "frequency", "q1_year", "median_year", "q3_year"],
                _outdir(args) / "trending.csv", _meta(config, corpus))


def _write_graph_artifacts(args, config, corpus, graph, stem):
    clustering = walktrap(graph) if args.cluster else None
    extra = {}
    if clustering is not None:
        extra["modularity"] = repr(clustering.modularity)
        extra["clusters"] = clustering.n_clusters
    path = _outdir(args) / f"{stem}.{args.flavor}"
    write_graph(graph, path, flavor=args.flavor, clustering=clustering,
                meta=_meta(config, corpus, **extra))
    rows = []
    for node in sorted(graph.nodes, key=lambda n: (-n.weight, n.id)):
        cluster = clustering.assignment.get(node.id, "") if clustering else ""
        rows.append((node.id, node.label, node.weight, cluster))
    write_table(rows, ["id", "label", "weight", "cluster"],
                _outdir(args) / f"{stem}_nodes.csv",
                _meta(config, corpus, **extra))
    write_table(sorted(graph.edges), ["source", "target", "weight"],
                _outdir(args) / f"{stem}_edges.csv",
                _meta(config, corpus, **extra))


def cmd_cooccur(args, config):
    corpus = _load(args)
    graph = cooccurrence_graph(corpus, args.field,
                               min_occurrence=args.min_occurrence)
    _write_graph_artifacts(args, config, corpus, graph, "cooccurrence")


def cmd_cocite(args, config):
    corpus = _load(args)
    graph = cocitation_graph(corpus, min_citations=args.min_citations)
    _write_graph_artifacts(args, config, corpus, graph, "cocitation")


def cmd_collab(args, config):
    corpus = _load(args)
    graph = collaboration_graph(corpus, args.level, top_n=args.top_n)
    _write_graph_artifacts(args, config, corpus, graph, f"collab_{args.level}")
    rows, excluded = collaboration_indices(corpus)
    write_table([(r.country, r.scp, r.mcp, fmt(r.mcp_pct, 1)) for r in rows],
                ["country", "scp", "mcp", "mcp_pct"],
                _outdir(args) / "collaboration_indices.csv",
                _meta(config, corpus, excluded=len(excluded)))


def cmd_pagerank(args, config):
    graph = read_graph(args.graph)
    scores = pagerank(graph, damping=args.damping)
    rows = sorted(scores.items(), key=lambda item: (-item[1], item[0]))
    write_table([(n, repr(s)) for n, s in rows], ["node", "pagerank"],
                _outdir(args) / "pagerank.csv",
                _meta(config, damping=args.damping))


def cmd_betweenness(args, config):
    graph = read_graph(args.graph)
    scores = betweenness(graph)
    rows = sorted(scores.items(), key=lambda item: (-item[1], item[0]))
    write_table([(n, repr(s)) for n, s in rows], ["node", "betweenness"],
                _outdir(args) / "betweenness.csv",
                _meta(config, paths="hop-count shortest paths; edge weights ignored"))


def cmd_walktrap(args, config):
    graph = read_graph(args.graph)
    clustering = walktrap(graph, walk_length=args.walk_length)
    rows = sorted(clustering.assignment.items())
    write_table(rows, ["node", "cluster"], _outdir(args) / "clusters.csv",
                _meta(config, modularity=repr(clustering.modularity),
                      clusters=clustering.n_clusters))


def cmd_historiograph(args, config):
    corpus = _load(args)
    local = match_local_citations(corpus)
    graph, flags = historiograph(corpus, n=args.top_n, local=local)
    path = _outdir(args) / f"historiograph.{args.flavor}"
    write_graph(graph, path, flavor=args.flavor,
                meta=_meta(config, corpus, flags=len(flags)))
    by_id = {doc.id: doc for doc in corpus.documents}
    rows = []
    for node in sorted(graph.nodes, key=lambda n: (-n.weight, n.id)):
        doc = by_id[node.id]
        # yearly average over citable years (in-progress year counts as one)
        yearly = "" if doc.pub_year is None else fmt(
            node.weight / (corpus.reference_year - doc.pub_year + 1))
        rows.append((node.id, node.label, int(node.weight),
                     doc.total_citations, yearly))
    write_table(rows, ["id", "label", "local_citations", "global_citations",
                       "avg_yearly_local_citations"],
                _outdir(args) / "historiograph_documents.csv",
                _meta(config, corpus, flags=len(flags)))
    if flags:
        write_table([(flag,) for flag in flags], ["flag"],
                    _outdir(args) / "historiograph_flags.csv",
                    _meta(config, corpus))


def cmd_sankey(args, config):
    corpus = _load(args)
    flow = three_field_flow(corpus, args.left, args.middle, args.right,
                            k_left=args.k_left, k_mid=args.k_mid,
                            k_right=args.k_right)
    item_rows = []
    for side, items in (("left", flow.left), ("middle", flow.middle),
                        ("right", flow.right)):
        for item, count in items:
            item_rows.append((side, item, count))
    write_table(item_rows, ["pillar", "item", "documents"],
                _outdir(args) / "sankey_items.csv",
                _meta(config, corpus, fields="-".join(flow.fields)))
    flow_rows = [("left-middle", a, b, w) for a, b, w in flow.flows_left]
    flow_rows += [("middle-right", a, b, w) for a, b, w in flow.flows_right]
    write_table(flow_rows, ["span", "from", "to", "weight"],
                _outdir(args) / "sankey_flows.csv",
                _meta(config, corpus, fields="-".join(flow.fields)))


def _parse_slices(text: str) -> list[tuple[int, int]]:
    out = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        try:
            start, end = chunk.split("-")
            out.append((int(start), int(end)))
        except ValueError:
            raise DataError(f"bad slice {chunk!r}: expected START-END")
    return out


def cmd_themes(args, config):
    corpus = _load(args)
    slices = thematic_evolution(corpus, _parse_slices(args.slices),
                                n_terms=args.n_terms,
                                min_cluster_freq=args.min_cluster_freq,
                                min_weight_index=args.min_weight_index,
                                ngram=args.ngram)
    cluster_rows = []
    link_rows = []
    for piece in slices:
        start, end = piece.period
        for cluster in piece.clusters:
            cluster_rows.append((start, end, cluster.label, cluster.frequency,
                                 "; ".join(cluster.terms)))
        if not piece.clusters and piece.flag:
            cluster_rows.append((start, end, "", 0, piece.flag))
        for a, b, w in piece.links_to_next:
            link_rows.append((start, end, a, b, fmt(w, 4)))
    write_table(cluster_rows, ["slice_start", "slice_end", "theme",
                               "frequency", "terms"],
                _outdir(args) / "themes.csv", _meta(config, corpus))
    write_table(link_rows, ["slice_start", "slice_end", "from_theme",
                            "to_theme", "inclusion_index"],
                _outdir(args) / "themes_links.csv", _meta(config, corpus))


def cmd_rpys(args, config):
    corpus = _load(args)
    rows, undated = rpys(corpus)
    write_table([(r.year, r.n_references, r.citations) for r in rows],
                ["year", "n_references", "citations"],
                _outdir(args) / "rpys.csv",
                _meta(config, corpus, undated_mentions=undated))


def cmd_methods(args, config):
    corpus = _load(args)
    lexicon = json.loads(Path(args.lexicon).read_text("utf-8"))
    niches = json.loads(Path(args.niches).read_text("utf-8"))
    if not isinstance(lexicon, dict) or not isinstance(niches, dict):
        raise DataError("lexicon and niches files must hold JSON objects")
    markers = {niche: {t.strip().lower() for t in terms}
               for niche, terms in niches.items()}

    def niche_of(doc):
        terms = set(doc.author_keywords)
        return {niche for niche, marks in markers.items() if terms & marks}

    result = method_occurrence(corpus, niche_of, lexicon, min_occ=args.min_occ)
    header = ["niche"] + result.methods + ["total"]
    rows = []
    for niche in result.niches:
        rows.append([niche] + [result.counts[(niche, m)] for m in result.methods]
                    + [result.row_totals[niche]])
    rows.append(["total"] + [result.column_totals[m] for m in result.methods]
                + [sum(result.column_totals.values())])
    write_table(rows, header, _outdir(args) / "methods.csv",
                _meta(config, corpus, suppressed=len(result.suppressed),
                      min_occ=args.min_occ))


def _load_multigraph(path: str) -> Multigraph:
    try:
        lines = Path(path).read_text("utf-8").splitlines()
    except FileNotFoundError:
        raise DataError(f"multigraph file not found: {path}")
    return Multigraph.from_lines(lines)


def cmd_mfas(args, config):
    mg = _load_multigraph(args.graph)
    seed = _require_seed(args, config)
    best, report = solve(mg, t=args.runs, seed=seed)
    meta = _meta(config, seed=seed, generator=report.generator,
                 runs=report.runs, best_size=report.best_size,
                 reference_bound=f"{report.reference_bound.numerator}"
                                 f"/{report.reference_bound.denominator}",
                 witness_order=" ".join(best.witness_order))
    write_table([(u, v, count) for (u, v), count in sorted(best.removed.items())],
                ["from", "to", "removed"], _outdir(args) / "mfas_solution.csv",
                meta)
    print(f"feedback arc set of size {best.size} after {report.runs} runs "
          f"(success bound {float(report.reference_bound):.10f})")


def cmd_mfas_calibrate(args, config):
    mg = _load_multigraph(args.graph)
    seed = _require_seed(args, config)
    result = calibration_harness(mg, t=args.runs, trials=args.trials,
                                 seed=seed, confidence=args.confidence)
    meta = _meta(config, seed=seed, generator=result.generator,
                 optimum=result.optimum,
                 per_run_success_rate=repr(result.per_run_success_rate),
                 wilson_low=repr(result.wilson_low),
                 wilson_high=repr(result.wilson_high),
                 confidence=result.confidence)
    write_table([(r.trial, r.best_size,
                  "" if r.first_success_run is None else r.first_success_run,
                  r.successes) for r in result.records],
                ["trial", "best_size", "first_success_run", "successes"],
                _outdir(args) / "calibration_trials.csv", meta)
    curve_rows = [(r + 1, repr(result.empirical_cumulative[r]),
                   repr(float(result.theoretical_cumulative[r])))
                  for r in range(result.runs_per_trial)]
    write_table(curve_rows, ["run", "empirical_success", "reference_bound"],
                _outdir(args) / "calibration_curve.csv", meta)
    print(f"optimum {result.optimum}; per-run success rate "
          f"{result.per_run_success_rate:.4f} "
          f"(Wilson {result.wilson_low:.4f}..{result.wilson_high:.4f})")


# Parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scimap",
        description="Bibliometric analysis and science mapping engine.")
    parser.add_argument("--version", action="version",
                        version=f"scimap {ENGINE_VERSION}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, corpus=True, out=True):
        if out:
            p.add_argument("--out", "-o", default=None,
                           help="output directory (default: $SCIMAP_OUT or .)")
        p.add_argument("--config", default=None,
                       help="JSON config file; flags take precedence")
        if corpus:
            p.add_argument("--corpus", required=True,
                           help="corpus file produced by ingest")

    p = sub.add_parser("ingest", help="parse export files into a corpus")
    p.add_argument("inputs", nargs="+", help="export files")
    p.add_argument("--format", choices=["plaintext", "bibtex"],
                   default="plaintext")
    p.add_argument("--reference-year", type=int, default=None)
    p.add_argument("--retracted", default=None,
                   help="file listing retracted ids or DOIs, one per line")
    p.add_argument("--cr-separator", default="\n",
                   help="cited-references separator for the BibTeX flavor")
    p.add_argument("--output", "-o", required=True,
                   help="corpus file to write (screening ledger lands beside it)")
    common(p, corpus=False, out=False)
    p.set_defaults(handler=cmd_ingest)

    p = sub.add_parser("coverage", help="data coverage quality table")
    common(p)
    p.set_defaults(handler=cmd_coverage)

    p = sub.add_parser("stats", help="descriptive statistics")
    common(p)
    p.set_defaults(handler=cmd_stats)

    p = sub.add_parser("bradford", help="Bradford source zones")
    common(p)
    p.set_defaults(handler=cmd_bradford)

    p = sub.add_parser("lotka", help="author productivity law")
    common(p)
    p.set_defaults(handler=cmd_lotka)

    p = sub.add_parser("hindex", help="entity h-index, optionally amortized")
    common(p)
    p.add_argument("--level", choices=["source", "author"], default="source")
    p.add_argument("--amortized", action="store_true")
    p.add_argument("--resolve-ties", action="store_true")
    p.set_defaults(handler=cmd_hindex)

    p = sub.add_parser("amortize", help="amortize a (year, metric) table")
    p.add_argument("--table", required=True, help="CSV of year,metric rows")
    p.add_argument("--reference-year", type=int, default=None)
    p.add_argument("--display-scale", type=float, default=1.0)
    common(p, corpus=False)
    p.set_defaults(handler=cmd_amortize)

    p = sub.add_parser("terms", help="most frequent terms")
    common(p)
    p.add_argument("--field", choices=["DE", "ID", "title-bigrams",
                                       "abstract-bigrams"], default="DE")
    p.add_argument("--top-n", type=int, default=None)
    p.set_defaults(handler=cmd_terms)

    p = sub.add_parser("trending", help="trending terms with quartile years")
    common(p)
    p.add_argument("--min-freq", type=int, default=5)
    p.add_argument("--max-per-year", type=int, default=4)
    p.set_defaults(handler=cmd_trending)

    p = sub.add_parser("cooccur", help="keyword co-occurrence network")
    common(p)
    p.add_argument("--field", choices=["DE", "ID"], default="DE")
    p.add_argument("--min-occurrence", type=int, default=5)
    p.add_argument("--flavor", choices=["graphml", "dot"], default="graphml")
    p.add_argument("--cluster", action="store_true",
                   help="attach walktrap clusters")
    p.set_defaults(handler=cmd_cooccur)

    p = sub.add_parser("cocite", help="reference co-citation network")
    common(p)
    p.add_argument("--min-citations", type=int, default=20)
    p.add_argument("--flavor", choices=["graphml", "dot"], default="graphml")
    p.add_argument("--cluster", action="store_true")
    p.set_defaults(handler=cmd_cocite)

    p = sub.add_parser("collab", help="collaboration network and indices")
    common(p)
    p.add_argument("--level", choices=["author", "institution", "country"],
                   default="institution")
    p.add_argument("--top-n", type=int, default=None)
    p.add_argument("--flavor", choices=["graphml", "dot"], default="graphml")
    p.add_argument("--cluster", action="store_true")
    p.set_defaults(handler=cmd_collab)

    p = sub.add_parser("pagerank", help="PageRank over an exported graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--damping", type=float, default=0.85)
    common(p, corpus=False)
    p.set_defaults(handler=cmd_pagerank)

    p = sub.add_parser("betweenness", help="betweenness over an exported graph")
    p.add_argument("--graph", required=True)
    common(p, corpus=False)
    p.set_defaults(handler=cmd_betweenness)

    p = sub.add_parser("walktrap", help="walktrap clustering of a graph file")
    p.add_argument("--graph", required=True)
    p.add_argument("--walk-length", type=int, default=4)
    common(p, corpus=False)
    p.set_defaults(handler=cmd_walktrap)

    p = sub.add_parser("historiograph", help="direct-citation historiograph")
    common(p)
    p.add_argument("--top-n", type=int, default=30)
    p.add_argument("--flavor", choices=["graphml", "dot"], default="graphml")
    p.set_defaults(handler=cmd_historiograph)

    p = sub.add_parser("sankey", help="three-field flow data")
    common(p)
    p.add_argument("--left", default="CO")
    p.add_argument("--middle", default="DE")
    p.add_argument("--right", default="C1")
    p.add_argument("--k-left", type=int, default=10)
    p.add_argument("--k-mid", type=int, default=10)
    p.add_argument("--k-right", type=int, default=10)
    p.set_defaults(handler=cmd_sankey)

    p = sub.add_parser("themes", help="thematic evolution over time slices")
    common(p)
    p.add_argument("--slices", required=True,
                   help="comma-separated START-END year ranges")
    p.add_argument("--n-terms", type=int, default=1000)
    p.add_argument("--min-cluster-freq", type=int, default=20)
    p.add_argument("--min-weight-index", type=float, default=0.02)
    p.add_argument("--ngram", type=int, choices=[1, 2], default=2)
    p.set_defaults(handler=cmd_themes)

    p = sub.add_parser("rpys", help="reference publication year spectroscopy")
    common(p)
    p.set_defaults(handler=cmd_rpys)

    p = sub.add_parser("methods", help="lexicon method occurrence by niche")
    common(p)
    p.add_argument("--lexicon", required=True,
                   help="JSON: method -> synonym terms")
    p.add_argument("--niches", required=True,
                   help="JSON: niche -> marker keywords")
    p.add_argument("--min-occ", type=int, default=3)
    p.set_defaults(handler=cmd_methods)

    p = sub.add_parser("mfas", help="Monte Carlo minimum feedback arc set")
    p.add_argument("--graph", required=True,
                   help="multigraph file: 'u v multiplicity' lines")
    p.add_argument("--runs", "-t", type=int, default=20)
    p.add_argument("--seed", type=int, default=None)
    common(p, corpus=False)
    p.set_defaults(handler=cmd_mfas)

    p = sub.add_parser("mfas-calibrate", help="calibrate solver vs oracle")
    p.add_argument("--graph", required=True)
    p.add_argument("--runs", "-t", type=int, default=10)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--confidence", type=float, default=0.99)
    p.add_argument("--seed", type=int, default=None)
    common(p, corpus=False)
    p.set_defaults(handler=cmd_mfas_calibrate)

    return parser


if __name__ == "__main__":
    sys.exit(main())
