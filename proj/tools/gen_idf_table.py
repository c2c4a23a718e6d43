#!/usr/bin/env python3
# Copyright 2026 The SafeTrend Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Builds data/idf_appendix.tsv from the appendix corpus vocabulary.

Seven anchor terms carry fixed IDF values. Every other corpus token gets
idf = a + b * zipf(token), with (a, b) the least-squares fit of the anchors
against their wordfreq Zipf frequencies, floored at 0.01. Tokens wordfreq
does not know (zipf 0) are left out of the table.

  tools/gen_idf_table.py --safetrend build/tools/safetrend > data/idf_appendix.tsv
"""

import argparse
import subprocess
import sys

from wordfreq import zipf_frequency

ANCHORS = {
    "phloem": 9.8125,
    "xylem": 9.6191,
    "offender": 7.3567,
    "rica": 6.0512,
    "costa": 5.2358,
    "manhattan": 5.14365,
    "project": 3.1363,
}
FLOOR = 0.01


def fit(points):
  n = len(points)
  mx = sum(x for x, _ in points) / n
  my = sum(y for _, y in points) / n
  sxx = sum((x - mx) ** 2 for x, _ in points)
  sxy = sum((x - mx) * (y - my) for x, y in points)
  b = sxy / sxx
  return my - b * mx, b


def main():
  parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
  parser.add_argument("--safetrend", default="build/tools/safetrend")
  parser.add_argument("--corpus", default="data/appendix_passages.txt")
  parser.add_argument("--stopwords", default="data/stopwords_en.txt")
  args = parser.parse_args()

  dump = subprocess.run(
      [args.safetrend, "vocab", "--corpus", args.corpus, "--stopwords",
       args.stopwords],
      check=True, capture_output=True, text=True).stdout
  tokens = [line.split("\t")[0] for line in dump.splitlines() if line]

  a, b = fit([(zipf_frequency(w, "en"), idf) for w, idf in ANCHORS.items()])
  print(f"fit: idf = {a:.6f} + {b:.6f} * zipf", file=sys.stderr)

  rows = []
  for token in tokens:
    if token in ANCHORS:
      rows.append((token, f"{ANCHORS[token]:g}"))
      continue
    zipf = zipf_frequency(token, "en")
    if zipf <= 0.0:
      continue
    rows.append((token, f"{max(FLOOR, a + b * zipf):.4f}"))
  missing = set(ANCHORS) - set(tokens)
  for token in sorted(missing):
    rows.append((token, f"{ANCHORS[token]:g}"))
  for token, idf in sorted(rows):
    print(f"{token}\t{idf}")


if __name__ == "__main__":
  main()
