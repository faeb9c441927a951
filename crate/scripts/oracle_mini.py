#!/usr/bin/env python3
"""Independent reference values for the bundled mini corpus.

Reads the expected bodies written by gen_mini.py and the demo lexicon, and
recomputes every statistic with deliberately naive code: quadratic string
scans, exact rational K-S p-values by lattice-path counting, brute-force
majority. Writes fixtures/mini-truth/oracle.json, which the acceptance test
compares against the tool's stats output.

Needs `tomli` on Python < 3.11.
"""

import json
import math
import string
from fractions import Fraction
from pathlib import Path

try:
    import tomllib
except ImportError:  # Python < 3.11
    import tomli as tomllib

ROOT = Path(__file__).resolve().parent.parent
TRUTH = ROOT / "fixtures" / "mini-truth"
LEXICON = ROOT / "crates" / "core" / "data" / "demo_lexicon.toml"
CONF_ORDER = [("ACL", 2020), ("EMNLP", 2021), ("NAACL", 2022)]


def is_acronym(term):
    return term != "" and all(c in string.ascii_uppercase + string.digits for c in term)


def count_term(text, term):
    acronym = is_acronym(term)
    n, i = 0, 0
    while i + len(term) <= len(text):
        window = text[i:i + len(term)]
        if acronym:
            hit = window == term and (i == 0 or not text[i - 1].isalnum())
        else:
            hit = window.lower() == term.lower()
        if hit:
            n += 1
            i += len(term)
        else:
            i += 1
    return n


def count_models(text, owners):
    counts = {}
    i = 0
    while i < len(text):
        if i > 0 and text[i - 1].isascii() and text[i - 1].isalpha():
            i += 1
            continue
        best = None
        for alias in owners:
            if text.startswith(alias, i) and (best is None or len(alias) > len(best)):
                best = alias
        if best is None:
            i += 1
        else:
            e = owners[best]
            counts[e] = counts.get(e, 0) + 1
            i += len(best)
    return counts


def root_of(entry, parents):
    while parents.get(entry):
        entry = parents[entry]
    return entry


def ks_statistic(a, b):
    d = Fraction(0)
    for x in set(a) | set(b):
        fa = Fraction(sum(1 for v in a if v <= x), len(a))
        fb = Fraction(sum(1 for v in b if v <= x), len(b))
        d = max(d, abs(fa - fb))
    return d


def ks_exact_p(a, b):
    """P(D >= d_obs) over all splits of the pooled sample, by path counting."""
    m, n = len(a), len(b)
    d = ks_statistic(a, b)
    pooled = sorted(a + b)
    # a path position (i, j) is checkable only where the pooled value changes
    checkable = set()
    for k in range(1, m + n + 1):
        if k == m + n or pooled[k] != pooled[k - 1]:
            checkable.add(k)
    total = math.comb(m + n, m)
    # count paths that never reach |i/m - j/n| >= d at a checkable point
    ways = [[0] * (n + 1) for _ in range(m + 1)]
    for i in range(m + 1):
        for j in range(n + 1):
            if i == 0 and j == 0:
                ways[i][j] = 1
                continue
            w = 0
            if i > 0:
                w += ways[i - 1][j]
            if j > 0:
                w += ways[i][j - 1]
            if (i + j) in checkable and abs(Fraction(i, m) - Fraction(j, n)) >= d and d > 0:
                w = 0
            ways[i][j] = w
    if d == 0:
        return d, Fraction(1)
    return d, Fraction(total - ways[m][n], total)


def main():
    lex = tomllib.loads(LEXICON.read_text())
    terms = lex["l_terms"]["terms"]
    owners, parents = {}, {}
    for e in lex["entry"]:
        for a in e["aliases"]:
            owners[a] = e["name"]
        parents[e["name"]] = e.get("parent")
    bodies = json.loads((TRUTH / "bodies.json").read_text())

    papers = {}
    for pid, rec in sorted(bodies.items()):
        text = rec["body"]
        per_term = {t: count_term(text, t) for t in terms}
        per_entry = count_models(text, owners)
        papers[pid] = {
            "conference": f"{rec['venue']}-{rec['year']}",
            "n_l": sum(per_term.values()),
            "per_term_l": per_term,
            "per_entry": per_entry,
            "n": sum(per_entry.values()),
        }

    confs = {}
    for venue, year in CONF_ORDER:
        key = f"{venue}-{year}"
        ps = sorted((pid, p) for pid, p in papers.items() if p["conference"] == key)
        k = len(ps)
        related = [(pid, p) for pid, p in ps if p["n_l"] > 0]
        entry_counts = {}
        for _, p in ps:
            for e, c in p["per_entry"].items():
                entry_counts[e] = entry_counts.get(e, 0) + c
        total = sum(entry_counts.values())
        by_entry = {e: c / total for e, c in entry_counts.items()}
        comp_counts = {}
        for e, c in entry_counts.items():
            r = root_of(e, parents)
            comp_counts[r] = comp_counts.get(r, 0) + c
        by_component = {r: c / total for r, c in comp_counts.items()}

        def majority(subset):
            counted = [p for _, p in subset if p["n"] > 0]
            wins = {}
            for p in counted:
                roots = {}
                for e, c in p["per_entry"].items():
                    r = root_of(e, parents)
                    roots[r] = roots.get(r, 0) + c
                # brute force: any root with more than half of N
                for r, c in roots.items():
                    if 2 * c > p["n"]:
                        wins[r] = wins.get(r, 0) + 1
            won = sum(wins.values())
            return {
                "counted_papers": len(counted),
                "majority_fraction": won / len(counted),
                "by_component": {r: w / len(counted) for r, w in wins.items()},
            }

        ranked = sorted(related, key=lambda t: (-t[1]["n_l"], t[0]))
        q = -(-len(ranked) // 4)
        q4 = [pid for pid, _ in ranked[:q]]
        q1 = [pid for pid, _ in ranked[len(ranked) - q:]]
        confs[key] = {
            "paper_count": k,
            "lm_related_count": len(related),
            "prop_lm_related": len(related) / k,
            "mean_n_l": sum(p["n_l"] for _, p in ps) / k,
            "mean_n": sum(p["n"] for _, p in ps) / k,
            "n_l_sample": [p["n_l"] for _, p in ps],
            "n_sample": [p["n"] for _, p in ps],
            "entry_counts": entry_counts,
            "by_entry": by_entry,
            "by_component": by_component,
            "majority_all": majority(ps),
            "majority_top_quarter": majority([(pid, papers[pid]) for pid in q4]),
            "q4_plus": q4,
            "q1_minus": q1,
        }

    base = confs[f"{CONF_ORDER[0][0]}-{CONF_ORDER[0][1]}"]
    for c in confs.values():
        c["estimated_mean_n_l"] = base["mean_n_l"] * (c["prop_lm_related"] / base["prop_lm_related"])

    keys = [f"{v}-{y}" for v, y in CONF_ORDER]
    ks = {"n_l": [], "n": []}
    jac = {"set": [], "weighted": []}
    for i, a in enumerate(keys):
        for b in keys[i + 1:]:
            for metric in ("n_l", "n"):
                d, p = ks_exact_p(confs[a][f"{metric}_sample"], confs[b][f"{metric}_sample"])
                ks[metric].append({"row": a, "col": b, "ks_statistic": float(d), "p_value": float(p)})
        for b in keys:
            ea, eb = confs[a]["by_entry"], confs[b]["by_entry"]
            sa, sb = set(ea), set(eb)
            jac["set"].append({"row": a, "col": b, "value": len(sa & sb) / len(sa | sb)})
            allk = sa | sb
            lo = sum(min(ea.get(x, 0.0), eb.get(x, 0.0)) for x in allk)
            hi = sum(max(ea.get(x, 0.0), eb.get(x, 0.0)) for x in allk)
            jac["weighted"].append({"row": a, "col": b, "value": lo / hi})

    out = {"papers": papers, "conferences": confs, "ks": ks, "jaccard": jac}
    with open(TRUTH / "oracle.json", "w", encoding="utf-8") as f:
        json.dump(out, f, indent=1, sort_keys=True)
        f.write("\n")


if __name__ == "__main__":
    main()
