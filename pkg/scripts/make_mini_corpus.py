"""Generate a deterministic synthetic Java method corpus.

Produces ~1150 method records covering the behaviors the pipeline has
to handle: methods from a bank of templates, exact duplicates,
alpha-renamed duplicates (same shape, identifiers consistently renamed,
so the abstract view is identical while the raw view differs), and
methods that each corpus filter should reject (too short, test-named,
toString, too many tokens).

Templates vary in structure (operators, idiom literals, optional
statements), not just identifiers, because identifier-level abstraction
collapses purely-renamed methods into one; structural variety is what
keeps most of the corpus distinct after abstract-level deduplication.

Record ids encode provenance so tests can form expectations:
  mini-NNNN   base method
  dupe-NNNN   byte-identical copy of mini-NNNN
  alpha-NNNN  alpha-renamed copy of mini-NNNN
  testname-N / tostring-N / short-N / huge-N  filter fodder

Pure stdlib; output is byte-identical for a given seed.
"""

from __future__ import annotations

import argparse
import json
import random
from pathlib import Path

NOUNS = [
    "value", "item", "node", "entry", "buffer", "result", "target", "source",
    "record", "element", "widget", "handler", "message", "stream", "option",
    "payload", "cursor", "bucket", "batch", "chunk", "label", "metric",
    "sample", "slot", "anchor", "margin",
]
VERBS = [
    "compute", "fetch", "resolve", "merge", "validate", "normalize",
    "collect", "emit", "apply", "derive", "scan", "locate", "combine",
    "render", "encode", "pack", "trim", "rotate", "weigh", "fold",
]
TYPES = [
    "Widget", "Record", "Entry", "Node", "Payload", "Bucket", "Channel",
    "Registry", "Session", "Router", "Ledger", "Packet",
]
WORDS = ["alpha", "beta", "gamma", "delta", "omega", "sigma", "kappa", "theta"]
NUMS = ["2", "3", "4", "5", "7"]
PROLOGUES = [
    "",
    "int guard = 0;\n",
    "int guard = 1;\n",
    "long tick = 0;\n",
    "boolean ready = true;\n",
    "boolean ready = false;\n",
]


def _cap(s: str) -> str:
    return s[0].upper() + s[1:]


# Each template renders from a fill dict.  Identifier slots ("a", "b",
# "c", "v", "T") are what the alpha-rename suffixes; structural slots
# (op/cmp/inc/g/sv/pro/m/w*) are shared between a method and its alpha
# twin so the pair abstracts identically.

def t_getter(f):
    if f["sv"] % 2 == 0:
        body = f"return this.{f['a']};\n"
    else:
        body = (
            f"if (this.{f['a']} == null) {{\n"
            f"return null;\n"
            f"}}\n"
            f"return this.{f['a']};\n"
        )
    return f"public {f['T']} get{_cap(f['a'])}{f['k']}() {{\n{f['pro']}{body}}}"


def t_setter(f):
    sv = f["sv"] % 3
    if sv == 0:
        guard = (
            f"if ({f['a']} == null) {{\n"
            f"throw new IllegalArgumentException(\"{f['a']} must not be null\");\n"
            f"}}\n"
        )
    elif sv == 1:
        guard = f"if ({f['a']} == null) {{\nreturn;\n}}\n"
    else:
        guard = ""
    return (
        f"public void set{_cap(f['a'])}{f['k']}({f['T']} {f['a']}) {{\n"
        f"{f['pro']}{guard}"
        f"this.{f['a']} = {f['a']};\n"
        f"}}"
    )


def t_sum_loop(f):
    return (
        f"public int {f['v']}Total{f['k']}(int[] {f['a']}) {{\n"
        f"{f['pro']}"
        f"int total = 0;\n"
        f"for (int i = 0; i {f['cmp']} {f['a']}.length; i++) {{\n"
        f"total += {f['a']}[i] {f['op']} {f['m']};\n"
        f"}}\n"
        f"return total;\n"
        f"}}"
    )


def t_foreach(f):
    sv = f["sv"] % 3
    guard = f"if ({f['a']} == null) {{\nreturn;\n}}\n" if sv == 1 else ""
    skip = f"if ({f['b']}.isEmpty()) {{\ncontinue;\n}}\n" if sv == 2 else ""
    return (
        f"public void {f['v']}All{f['k']}(List<String> {f['a']}) {{\n"
        f"{f['pro']}{guard}"
        f"for (String {f['b']} : {f['a']}) {{\n"
        f"{skip}"
        f"System.out.println({f['b']});\n"
        f"}}\n"
        f"}}"
    )


def t_while_count(f):
    return (
        f"public int {f['v']}Hits{f['k']}(String {f['a']}, char {f['b']}) {{\n"
        f"{f['pro']}"
        f"int count = 0;\n"
        f"int index = 0;\n"
        f"while (index {f['cmp']} {f['a']}.length()) {{\n"
        f"if ({f['a']}.charAt(index) {f['eq']} {f['b']}) {{\n"
        f"count++;\n"
        f"}}\n"
        f"{f['inc']};\n"
        f"}}\n"
        f"return count;\n"
        f"}}"
    )


def t_try_parse(f):
    arg = f"{f['a']}.trim()" if f["sv"] % 2 == 0 else f["a"]
    return (
        f"public int {f['v']}Num{f['k']}(String {f['a']}) {{\n"
        f"{f['pro']}"
        f"try {{\n"
        f"return Integer.parseInt({arg});\n"
        f"}} catch (NumberFormatException {f['b']}) {{\n"
        f"return {f['g']};\n"
        f"}}\n"
        f"}}"
    )


def t_join(f):
    return (
        f"public String {f['v']}Parts{f['k']}(List<String> {f['a']}, String {f['b']}) {{\n"
        f"{f['pro']}"
        f"StringBuilder {f['c']} = new StringBuilder();\n"
        f"for (int i = 0; i {f['cmp']} {f['a']}.size(); i++) {{\n"
        f"if (i {f['cmp2']} 0) {{\n"
        f"{f['c']}.append({f['b']});\n"
        f"}}\n"
        f"{f['c']}.append({f['a']}.get(i));\n"
        f"}}\n"
        f"return {f['c']}.toString();\n"
        f"}}"
    )


def t_pick(f):
    sv = f["sv"] % 3
    if sv == 0:
        body = f"if (flag) {{\nreturn {f['b']};\n}}\nreturn {f['c']};\n"
    elif sv == 1:
        body = f"if (!flag) {{\nreturn {f['c']};\n}}\nreturn {f['b']};\n"
    else:
        body = f"return flag ? {f['b']} : {f['c']};\n"
    return (
        f"public {f['T']} pick{_cap(f['a'])}{f['k']}({f['T']} {f['b']}, {f['T']} {f['c']}, boolean flag) {{\n"
        f"{f['pro']}{body}}}"
    )


def t_safe_size(f):
    if f["sv"] % 2 == 0:
        body = f"if ({f['a']} == null) {{\nreturn {f['g']};\n}}\nreturn {f['a']}.size();\n"
    else:
        body = f"if ({f['a']} != null) {{\nreturn {f['a']}.size();\n}}\nreturn {f['g']};\n"
    return f"public int {f['v']}Size{f['k']}(List<{f['T']}> {f['a']}) {{\n{f['pro']}{body}}}"


def t_max_scan(f):
    init = f"{f['a']}[0]" if f["sv"] % 2 == 0 else "0"
    return (
        f"public int {f['v']}Max{f['k']}(int[] {f['a']}) {{\n"
        f"{f['pro']}"
        f"int best = {init};\n"
        f"for (int i = 1; i {f['cmp']} {f['a']}.length; i++) {{\n"
        f"if ({f['a']}[i] {f['cmp2']} best) {{\n"
        f"best = {f['a']}[i];\n"
        f"}}\n"
        f"}}\n"
        f"return best;\n"
        f"}}"
    )


def t_do_while(f):
    return (
        f"public int {f['v']}Cycle{f['k']}(int seed) {{\n"
        f"{f['pro']}"
        f"int {f['a']} = seed;\n"
        f"do {{\n"
        f"{f['a']} = {f['a']} {f['op2']} 2;\n"
        f"}} while ({f['a']} {f['cmp2']} {f['m']});\n"
        f"return {f['a']};\n"
        f"}}"
    )


def t_try_finally(f):
    mark = f"{f['a']}.mark();\n" if f["sv"] % 2 == 1 else ""
    return (
        f"public void {f['v']}Close{f['k']}({f['T']} {f['a']}) {{\n"
        f"{f['pro']}"
        f"try {{\n"
        f"{mark}{f['a']}.flush();\n"
        f"}} finally {{\n"
        f"{f['a']}.close();\n"
        f"}}\n"
        f"}}"
    )


def t_ternary(f):
    if f["sv"] % 2 == 0:
        tail = f"return {f['b']}.isEmpty() ? \"{f['w']}\" : {f['b']}.toUpperCase();\n"
    else:
        tail = (
            f"if ({f['b']}.isEmpty()) {{\n"
            f"return \"{f['w']}\";\n"
            f"}} else {{\n"
            f"return {f['b']}.toUpperCase();\n"
            f"}}\n"
        )
    return (
        f"public String {f['v']}Label{f['k']}(String {f['a']}) {{\n"
        f"{f['pro']}"
        f"String {f['b']} = {f['a']}.trim();\n"
        f"{tail}}}"
    )


def t_array_init(f):
    sv = f["sv"] % 3
    elems = [f["a"], f["b"]]
    if sv == 1:
        elems.append("0")
    elif sv == 2:
        elems.insert(0, "0")
    inner = ", ".join(elems)
    return (
        f"public int[] {f['v']}Pair{f['k']}(int {f['a']}, int {f['b']}) {{\n"
        f"{f['pro']}"
        f"int[] {f['c']} = new int[] {{ {inner} }};\n"
        f"return {f['c']};\n"
        f"}}"
    )


def t_switch(f):
    extra = f"case 2:\nreturn \"{f['w3']}\";\n" if f["sv"] % 2 == 1 else ""
    return (
        f"public String {f['v']}Kind{f['k']}(int code) {{\n"
        f"{f['pro']}"
        f"switch (code) {{\n"
        f"case 0:\n"
        f"return \"{f['w']}\";\n"
        f"case 1:\n"
        f"return \"{f['w2']}\";\n"
        f"{extra}"
        f"default:\n"
        f"return \"{f['w']}\";\n"
        f"}}\n"
        f"}}"
    )


def t_match(f):
    if f["sv"] % 2 == 0:
        body = (
            f"if ({f['a']} == null || {f['b']} == null) {{\n"
            f"return false;\n"
            f"}}\n"
            f"return {f['a']}.equalsIgnoreCase({f['b']});\n"
        )
    else:
        body = (
            f"if ({f['a']} != null && {f['b']} != null) {{\n"
            f"return {f['a']}.equalsIgnoreCase({f['b']});\n"
            f"}}\n"
            f"return false;\n"
        )
    return (
        f"public boolean {f['v']}Match{f['k']}(String {f['a']}, String {f['b']}) {{\n"
        f"{f['pro']}{body}}}"
    )


def t_annotated(f):
    return (
        f"@Override\n"
        f"public int {f['v']}Weight{f['k']}() {{\n"
        f"{f['pro']}"
        f"return this.{f['a']} {f['op']} {f['m']};\n"
        f"}}"
    )


TEMPLATES = [
    (t_getter, ["a", "T"]),
    (t_setter, ["a", "T"]),
    (t_sum_loop, ["v", "a"]),
    (t_foreach, ["v", "a", "b"]),
    (t_while_count, ["v", "a", "b"]),
    (t_try_parse, ["v", "a", "b"]),
    (t_join, ["v", "a", "b", "c"]),
    (t_pick, ["a", "b", "c", "T"]),
    (t_safe_size, ["v", "a", "T"]),
    (t_max_scan, ["v", "a"]),
    (t_do_while, ["v", "a"]),
    (t_try_finally, ["v", "a", "T"]),
    (t_ternary, ["v", "a", "b"]),
    (t_array_init, ["v", "a", "b", "c"]),
    (t_switch, ["v"]),
    (t_match, ["v", "a", "b"]),
    (t_annotated, ["v", "a"]),
]

N_BASE = 1000
N_DUPE = 40
N_ALPHA = 40
N_TESTNAME = 20
N_TOSTRING = 10
N_SHORT = 20
N_HUGE = 20


def _make_fill(rnd: random.Random, ident_slots, k: int) -> dict:
    lowers = [s for s in ident_slots if s in ("a", "b", "c")]
    fill = dict(zip(lowers, rnd.sample(NOUNS, len(lowers))))
    fill["v"] = rnd.choice(VERBS)
    fill["T"] = rnd.choice(TYPES)
    fill["k"] = str(k)
    fill["m"] = rnd.choice(NUMS)
    fill["w"] = rnd.choice(WORDS)
    fill["w2"] = rnd.choice(WORDS)
    fill["w3"] = rnd.choice(WORDS)
    fill["pro"] = rnd.choice(PROLOGUES)
    fill["op"] = rnd.choice(["+", "-", "*"])
    fill["op2"] = rnd.choice(["/", "-", ">>"])
    fill["cmp"] = rnd.choice(["<", "<=", "!="])
    fill["cmp2"] = rnd.choice([">", ">=", "<"])
    fill["eq"] = rnd.choice(["==", "!="])
    fill["inc"] = rnd.choice(["index++", "index += 1"])
    fill["g"] = rnd.choice(["0", "1", "-1"])
    fill["sv"] = rnd.randrange(6)
    return fill


def _alpha_fill(fill: dict, ident_slots) -> dict:
    out = dict(fill)
    for slot in ident_slots:
        out[slot] = fill[slot] + "X"
    return out


def build_corpus(seed: int = 97) -> list[dict]:
    rnd = random.Random(seed)
    records: list[dict] = []
    base: list[tuple[int, dict]] = []  # (templateIndex, fill)

    for k in range(N_BASE):
        ti = k % len(TEMPLATES)
        render, ident_slots = TEMPLATES[ti]
        fill = _make_fill(rnd, ident_slots, k)
        base.append((ti, fill))
        domain = "android" if k % 3 == 0 else "java"
        records.append({"id": f"mini-{k:04d}", "domain": domain, "code": render(fill)})

    marked = rnd.sample(range(N_BASE), N_DUPE + N_ALPHA)
    for k in sorted(marked[:N_DUPE]):
        ti, fill = base[k]
        render, _ = TEMPLATES[ti]
        records.append({"id": f"dupe-{k:04d}", "domain": "java", "code": render(fill)})
    for k in sorted(marked[N_DUPE:]):
        ti, fill = base[k]
        render, ident_slots = TEMPLATES[ti]
        code = render(_alpha_fill(fill, ident_slots))
        records.append({"id": f"alpha-{k:04d}", "domain": "java", "code": code})

    for k in range(N_TESTNAME):
        noun = rnd.choice(NOUNS)
        code = (
            f"public void testRender{k}({_cap(noun)} {noun}) {{\n"
            f"{noun}.flush();\n"
            f"{noun}.close();\n"
            f"}}"
        )
        records.append({"id": f"testname-{k}", "domain": "java", "code": code})

    for k in range(N_TOSTRING):
        noun = rnd.choice(NOUNS)
        code = (
            f"public String toString() {{\n"
            f"return \"{_cap(noun)}[\" + {noun} + \"]\";\n"
            f"}}"
        )
        records.append({"id": f"tostring-{k}", "domain": "java", "code": code})

    for k in range(N_SHORT):
        noun = rnd.choice(NOUNS)
        code = f"public int idOf{k}() {{ return this.{noun}; }}"
        records.append({"id": f"short-{k}", "domain": "java", "code": code})

    for k in range(N_HUGE):
        noun = rnd.choice(NOUNS)
        lines = [f"public int tally{k}(int[] {noun}) {{", "int total = 0;"]
        for j in range(20):
            lines.append(f"total += {noun}[{j}] * 2;")
        lines.append("return total;")
        lines.append("}")
        records.append({"id": f"huge-{k}", "domain": "java", "code": "\n".join(lines)})

    return records


def write_corpus(records, out: Path) -> None:
    with out.open("w", encoding="utf-8") as fh:
        fh.write(json.dumps({"format": "corpus@1"}, sort_keys=True) + "\n")
        for rec in records:
            fh.write(json.dumps(rec, sort_keys=True, ensure_ascii=False) + "\n")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="mini_corpus.jsonl")
    ap.add_argument("--seed", type=int, default=97)
    args = ap.parse_args()
    records = build_corpus(args.seed)
    write_corpus(records, Path(args.out))
    print(f"wrote {len(records)} records to {args.out}")


if __name__ == "__main__":
    main()
