#!/usr/bin/env python3
"""Convert upstream lexicon distributions into the bundled TSV data files.

Sources (fetch with pip/npm, then unpack):
  pip download --no-deps afinn vaderSentiment textblob
  npm pack sentiword

Usage:
  build_lexicons.py --afinn AFINN-111.txt --vader vader_lexicon.txt \
      --vader-module vaderSentiment.py --pattern en-sentiment.xml \
      --swn modifiedSentiWordNet.json --out crates/core/data/lexicons
"""
import argparse
import ast
import hashlib
import json
import re
import xml.etree.ElementTree as ET
from collections import defaultdict
from pathlib import Path

TOKEN = re.compile(r"^[a-z0-9]+(?:'[a-z0-9]+)*$")


def fmt(x):
    return repr(round(float(x), 6))


def write(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for line in header:
            f.write(f"# {line}\n")
        for row in rows:
            f.write("\t".join(row) + "\n")


def vader_constants(module_path):
    src = Path(module_path).read_text(encoding="utf-8")
    tree = ast.parse(src)
    consts = {}
    for node in tree.body:
        if isinstance(node, ast.Assign) and isinstance(node.targets[0], ast.Name):
            name = node.targets[0].id
            if name in ("B_INCR", "B_DECR"):
                consts[name] = ast.literal_eval(node.value)
    negate, booster = None, None
    for node in tree.body:
        if isinstance(node, ast.Assign) and isinstance(node.targets[0], ast.Name):
            name = node.targets[0].id
            if name == "NEGATE":
                negate = ast.literal_eval(node.value)
            elif name == "BOOSTER_DICT":
                booster = {}
                for k, v in zip(node.value.keys, node.value.values):
                    booster[ast.literal_eval(k)] = consts[v.id]
    return negate, booster


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--afinn", required=True)
    ap.add_argument("--vader", required=True)
    ap.add_argument("--vader-module", required=True)
    ap.add_argument("--pattern", required=True)
    ap.add_argument("--swn", required=True)
    ap.add_argument("--out", required=True)
    a = ap.parse_args()
    out = Path(a.out)
    out.mkdir(parents=True, exist_ok=True)

    afinn = []
    for line in open(a.afinn, encoding="utf-8"):
        word, val = line.rstrip("\n").rsplit("\t", 1)
        if TOKEN.match(word):
            afinn.append((word, str(int(val))))
    write(out / "afinn-111.tsv",
          ["AFINN-111 word list (Finn Arup Nielsen), single-token entries only.",
           "word<TAB>integer valence in [-5, 5]"], sorted(afinn))

    vader = []
    for line in open(a.vader, encoding="utf-8"):
        parts = line.rstrip("\n").split("\t")
        if len(parts) >= 2 and TOKEN.match(parts[0]):
            vader.append((parts[0], fmt(parts[1])))
    write(out / "vader-valence.tsv",
          ["VADER valence lexicon (Hutto & Gilbert), single-token entries only.",
           "word<TAB>mean valence in [-4, 4]"], sorted(vader))

    negate, booster = vader_constants(a.vader_module)
    write(out / "vader-negators.tsv",
          ["VADER negation words.", "word"],
          sorted((w,) for w in set(negate) if TOKEN.match(w)))
    write(out / "vader-boosters.tsv",
          ["VADER booster/dampener words.", "word<TAB>increment"],
          sorted((w, fmt(v)) for w, v in booster.items() if TOKEN.match(w)))

    pol = defaultdict(list)
    for el in ET.parse(a.pattern).getroot().iter("word"):
        w = el.get("form", "").lower()
        if TOKEN.match(w):
            pol[w].append(float(el.get("polarity")))
    write(out / "pattern-polarity.tsv",
          ["Pattern/TextBlob English adjective polarity lexicon (De Smedt & Daelemans),",
           "polarity averaged across senses.", "word<TAB>polarity in [-1, 1]"],
          sorted((w, fmt(sum(v) / len(v))) for w, v in pol.items()))

    swn = defaultdict(list)
    data = json.load(open(a.swn, encoding="utf-8"))
    for entries in data.values():
        for e in entries:
            w = e["SynsetTerms"].split("#")[0].lower()
            if TOKEN.match(w):
                swn[w].append((float(e["PosScore"]), float(e["NegScore"])))
    rows = []
    for w, senses in swn.items():
        p = sum(s[0] for s in senses) / len(senses)
        n = sum(s[1] for s in senses) / len(senses)
        if round(p, 6) != 0.0 or round(n, 6) != 0.0:
            rows.append((w, fmt(p), fmt(n)))
    write(out / "swn-averaged.tsv",
          ["SentiWordNet 3.0 word-level scores averaged over all senses and parts of speech;",
           "purely objective words (pos = neg = 0) omitted.", "word<TAB>pos<TAB>neg"],
          sorted(rows))

    for p in sorted(out.glob("*.tsv")):
        print(hashlib.sha256(p.read_bytes()).hexdigest(), p.name)


if __name__ == "__main__":
    main()
