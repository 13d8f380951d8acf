"""Builds data/lexicons/dictionary.txt from wordfreq's large English table.

Usage: python make_dictionary.py path/to/large_en.msgpack.gz out.txt [max_cb]

The table is a list of frequency buckets; bucket i holds words whose
frequency is about 10 ** (-i / 100). Words at or above 1e-6 (bucket 600)
that look like plain English words are kept.
"""
import gzip
import re
import sys

import msgpack

WORD = re.compile(r"[a-z]+('[a-z]+)?")


def main():
    src, dst = sys.argv[1], sys.argv[2]
    max_cb = int(sys.argv[3]) if len(sys.argv) > 3 else 600
    with gzip.open(src, "rb") as f:
        table = msgpack.load(f, raw=False)
    buckets = table[1:] if isinstance(table[0], dict) else table
    words = set()
    for cb, bucket in enumerate(buckets):
        if cb > max_cb:
            break
        for w in bucket:
            w = w.replace("’", "'")
            if WORD.fullmatch(w):
                words.add(w)
    with open(dst, "w", encoding="utf-8") as out:
        for w in sorted(words):
            out.write(w + "\n")
    print(f"{len(words)} words", file=sys.stderr)


if __name__ == "__main__":
    main()
