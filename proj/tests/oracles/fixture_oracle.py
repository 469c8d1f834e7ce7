#!/usr/bin/env python3
# Copyright 2026 The MetaFidelity Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Independent oracle for the bundled fixtures.

Writes the miniature teacher/student dumps and the code-pair fixture into
tests/data/, then prints every metric the C++ tests freeze, computed here with
mpmath / difflib-free dynamic programming / scipy. Run once; the printed
values are pasted into the tests.

    python3 tests/oracles/fixture_oracle.py
"""

import json
import math
import os
import re

import mpmath
from scipy import stats

mpmath.mp.dps = 50
HERE = os.path.dirname(os.path.abspath(__file__))
DATA = os.path.join(HERE, "..", "data")

# Teacher: probabilities over 3 classes. Student: logits.
# Sample s07 flips the student's argmax; s03 agrees with the teacher but is
# hesitant; s11 has a wide KL gap. No teacher confidence sits on a tau value
# or a bin edge for B in {10, 15, 20}, so membership never hinges on rounding.
TEACHER = [
    ("s01", [0.94, 0.04, 0.02], 0),
    ("s02", [0.09, 0.86, 0.05], 1),
    ("s03", [0.05, 0.03, 0.92], 2),
    ("s04", [0.62, 0.28, 0.10], 0),
    ("s05", [0.19, 0.71, 0.10], 0),
    ("s06", [0.97, 0.02, 0.01], 0),
    ("s07", [0.56, 0.39, 0.05], 0),
    ("s08", [0.05, 0.04, 0.91], 2),
    ("s09", [0.33, 0.34, 0.33], 1),
    ("s10", [0.82, 0.10, 0.08], 1),
    ("s11", [0.88, 0.06, 0.06], 0),
    ("s12", [0.14, 0.81, 0.05], 1),
    ("s13", [0.44, 0.44, 0.12], 0),
    ("s14", [0.02, 0.96, 0.02], 1),
    ("s15", [0.72, 0.18, 0.10], 2),
    ("s16", [0.24, 0.24, 0.52], 2),
]
STUDENT = [
    ("s01", [3.0, 0.0, -0.5], 0),
    ("s02", [-0.5, 2.0, -1.0], 1),
    ("s03", [-0.2, -0.4, 1.2], 2),
    ("s04", [0.8, 0.3, -0.9], 0),
    ("s05", [-0.3, 1.1, -0.6], 0),
    ("s06", [4.0, -0.5, -1.0], 0),
    ("s07", [0.1, 0.6, -1.5], 0),
    ("s08", [-1.2, -1.0, 2.6], 2),
    ("s09", [0.0, 0.1, 0.0], 1),
    ("s10", [1.9, -0.2, -0.4], 1),
    ("s11", [0.4, 0.2, 0.1], 0),
    ("s12", [-0.8, 1.6, -1.4], 1),
    ("s13", [0.5, 0.5, -1.0], 0),
    ("s14", [-2.0, 3.5, -2.0], 1),
    ("s15", [1.0, 0.1, -0.2], 2),
    ("s16", [-0.4, -0.4, 0.6], 2),
]

CODE_PAIRS = [
    {
        "id": "p1",
        "lang": "c",
        "original": "int add(int a, int b) {\n  // sum two values\n  int total = a + b;\n  return total;\n}\n",
        "adversarial": "int add(int x, int b) {\n  // sum two values\n  int acc = x + b;\n  return acc;\n}\n",
        "original_embedding": [1.0, 1.0, 0.0],
        "adversarial_embedding": [1.0, 0.0, 0.0],
    },
    {
        "id": "p2",
        "lang": "java",
        "original": "public int count(String s) { int n = 0; for (char c : s.toCharArray()) { if (c == 'a') n++; } return n; }",
        "adversarial": "public int count(String text) { int kitten = 0; for (char c : text.toCharArray()) { if (c == 'a') kitten++; } return kitten; }",
        "original_embedding": [0.5, 0.5, 0.5],
        "adversarial_embedding": [1.0, 1.0, 1.0],
    },
    {
        "id": "p3",
        "lang": "c",
        "original": "#include <stdio.h>\nvoid foo(void) { printf(\"foo bar\\n\"); }\n",
        "adversarial": "#include <stdio.h>\nvoid bar(void) { printf(\"foo bar\\n\"); }\n",
        "original_embedding": [0.0, 2.0, 0.0],
        "adversarial_embedding": [0.0, 0.0, 3.0],
    },
]


def softmax(v):
    m = max(v)
    e = [mpmath.e ** (mpmath.mpf(x) - m) for x in v]
    s = sum(e)
    return [x / s for x in e]


def normalize(v):
    s = sum(mpmath.mpf(x) for x in v)
    return [mpmath.mpf(x) / s for x in v]


def argmax(v):
    best = 0
    for i in range(1, len(v)):
        if v[i] > v[best]:
            best = i
    return best


def kl(p, q, eps=mpmath.mpf("1e-12")):
    if any(x < eps for x in q):
        q = [max(x, eps) for x in q]
        s = sum(q)
        q = [x / s for x in q]
    return sum(a * mpmath.log(a / b) for a, b in zip(p, q) if a != 0)


def write_dumps():
    with open(os.path.join(DATA, "mini_teacher.ndjson"), "w") as f:
        for i, p, y in TEACHER:
            f.write(json.dumps({"id": i, "probs": p, "label": y}) + "\n")
    with open(os.path.join(DATA, "mini_student.ndjson"), "w") as f:
        for i, l, y in STUDENT:
            f.write(json.dumps({"id": i, "logits": l, "label": y}) + "\n")
    with open(os.path.join(DATA, "code_pairs.ndjson"), "w") as f:
        for pair in CODE_PAIRS:
            f.write(json.dumps(pair) + "\n")


def fidelity():
    t = [normalize(p) for _, p, _ in TEACHER]
    s = [softmax(l) for _, l, _ in STUDENT]
    y = [lab for _, _, lab in TEACHER]
    n = len(t)
    mr1 = sum(argmax(a) == argmax(b) for a, b in zip(t, s)) / n
    kls = [kl(a, b) for a, b in zip(t, s)]
    mr2 = sum(k <= 0.5 for k in kls) / n
    print("MR1 hold", mr1, "violation", 1 - mr1)
    print("MR2 hold", mr2, "violating", [TEACHER[i][0] for i, k in enumerate(kls) if k > 0.5])
    for tau in (0.8, 0.85, 0.9):
        conf = [i for i in range(n) if max(t[i]) >= tau]
        holds = [i for i in conf if argmax(s[i]) == argmax(t[i]) and max(s[i]) >= tau]
        print("MR3 tau", tau, "support", len(conf), "hold", len(holds) / len(conf))
    for bins in (10, 15, 20):
        total = 0
        for b in range(bins):
            lo, hi = mpmath.mpf(b) / bins, mpmath.mpf(b + 1) / bins
            members = [i for i in range(n) if lo <= max(t[i]) < hi or (b == bins - 1 and max(t[i]) == 1)]
            if not members:
                continue
            at = mpmath.mpf(sum(argmax(t[i]) == y[i] for i in members)) / len(members)
            ast = mpmath.mpf(sum(argmax(s[i]) == y[i] for i in members)) / len(members)
            total += abs(at - ast)
        print("MR4 B", bins, "ECA", mpmath.nstr(total / bins, 17))
    for i in range(n):
        print("KL", TEACHER[i][0], mpmath.nstr(kls[i], 17), mpmath.nstr(kl(s[i], t[i]), 17))


C_KEYWORDS = {"int", "void", "return", "char", "if", "for"}
JAVA_KEYWORDS = {"public", "int", "for", "char", "if", "return"}
TOKEN = re.compile(r'"(?:\\.|[^"\\])*"|\'(?:\\.|[^\'\\])*\'|[A-Za-z_]\w*|\d+|\+\+|==|\S')


def tokens(src):
    # Drop comments and whole preprocessor lines (kept as one token).
    out = []
    for line in src.split("\n"):
        if line.lstrip().startswith("#"):
            out.append(line.strip())
            continue
        line = re.sub(r"//.*", "", line)
        out.extend(TOKEN.findall(line))
    return out


def identifiers(toks, keywords):
    return {t for t in toks if re.fullmatch(r"[A-Za-z_]\w*", t) and t not in keywords}


def lcs_len(a, b):
    dp = [[0] * (len(b) + 1) for _ in range(len(a) + 1)]
    for i in range(len(a) - 1, -1, -1):
        for j in range(len(b) - 1, -1, -1):
            dp[i][j] = dp[i + 1][j + 1] + 1 if a[i] == b[j] else max(dp[i + 1][j], dp[i][j + 1])
    return dp[0][0]


def lev(a, b):
    dp = list(range(len(b) + 1))
    for i in range(1, len(a) + 1):
        prev, dp[0] = dp[0], i
        for j in range(1, len(b) + 1):
            cur = dp[j]
            dp[j] = min(dp[j] + 1, dp[j - 1] + 1, prev + (a[i - 1] != b[j - 1]))
            prev = cur
    return dp[len(b)]


def quality():
    k_total = n_total = tok_total = mod_total = 0
    for pair in CODE_PAIRS:
        kw = C_KEYWORDS if pair["lang"] == "c" else JAVA_KEYWORDS
        a, b = tokens(pair["original"]), tokens(pair["adversarial"])
        ia, ib = identifiers(a, kw), identifiers(b, kw)
        k, nn = len(ia), len(ia - ib)
        k_total += k
        n_total += nn
        tok_total += len(a)
        mod_total += len(a) - lcs_len(a, b)
        print("pair", pair["id"], "k", k, "n", nn, "tokens", len(a), "modified", len(a) - lcs_len(a, b))
    print("ICR", n_total, "/", k_total, "=", n_total / k_total)
    print("TCR", mod_total, "/", tok_total, "=", mod_total / tok_total)
    # Every substitution in these pairs is a one-for-one identifier rename.
    subs = [("a", "x"), ("total", "acc"), ("a", "x"), ("total", "acc"),
            ("s", "text"), ("n", "kitten"), ("s", "text"), ("n", "kitten"), ("n", "kitten"),
            ("foo", "bar")]
    assert len(subs) == mod_total
    print("AED", sum(lev(x, y) for x, y in subs), "/", len(subs), "=",
          sum(lev(x, y) for x, y in subs) / len(subs))
    cos = []
    for pair in CODE_PAIRS:
        u, v = pair["original_embedding"], pair["adversarial_embedding"]
        cos.append(sum(x * y for x, y in zip(u, v)) / math.sqrt(sum(x * x for x in u) * sum(y * y for y in v)))
    print("ACS", repr(sum(cos) / len(cos)), cos)


def significance():
    print("friedman ordered", stats.friedmanchisquare([1, 1, 1, 1], [2, 2, 2, 2], [3, 3, 3, 3]))


if __name__ == "__main__":
    write_dumps()
    fidelity()
    quality()
    significance()
