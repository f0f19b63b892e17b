#!/usr/bin/env python3
"""Writes the 30-review templated corpus used by the overfit tests.

Every opinion word carries a fixed sentiment, so the labels are learnable
from the opinion alone. Sentences with two aspects pair each opinion with
the aspect of its own clause and leave the cross pairs unrelated.
"""
import json
import random
import sys

ASPECTS = [
    ("battery life", ["NN", "NN"]),
    ("screen", ["NN"]),
    ("price", ["NN"]),
    ("camera", ["NN"]),
    ("sound quality", ["NN", "NN"]),
    ("keyboard", ["NN"]),
    ("customer service", ["NN", "NN"]),
    ("design", ["NN"]),
    ("speakers", ["NNS"]),
    ("touchpad", ["NN"]),
]

OPINIONS = [
    ("great", ["JJ"], "positive"),
    ("excellent", ["JJ"], "positive"),
    ("really good", ["RB", "JJ"], "positive"),
    ("terrible", ["JJ"], "negative"),
    ("awful", ["JJ"], "negative"),
    ("very poor", ["RB", "JJ"], "negative"),
    ("okay", ["JJ"], "neutral"),
    ("average", ["JJ"], "neutral"),
    ("surprising", ["JJ"], "unknown"),
    ("different", ["JJ"], "unknown"),
]


class Builder:
    def __init__(self):
        self.tokens, self.pos = [], []
        self.aspects, self.opinions, self.relations = [], [], []

    def words(self, text, tags):
        self.tokens += text.split()
        self.pos += tags

    def aspect(self, a):
        start = len(self.tokens)
        self.words(*a)
        self.aspects.append({"start": start, "end": len(self.tokens)})
        return len(self.aspects) - 1

    def opinion(self, o):
        start = len(self.tokens)
        self.words(o[0], o[1])
        self.opinions.append({"start": start, "end": len(self.tokens), "sentiment": o[2]})
        return len(self.opinions) - 1

    def review(self, rid):
        return {"id": rid, "tokens": self.tokens, "pos": self.pos, "aspects": self.aspects,
                "opinions": self.opinions, "relations": [list(r) for r in self.relations]}


def simple(a, o):
    # the A is O
    b = Builder()
    b.words("the", ["DT"])
    ai = b.aspect(a)
    b.words("is", ["VBZ"])
    oi = b.opinion(o)
    b.relations.append((ai, oi))
    return b


def prenominal(a, o):
    # O A overall .
    b = Builder()
    b.words("a", ["DT"])
    oi = b.opinion(o)
    ai = b.aspect(a)
    b.words("overall .", ["RB", "."])
    b.relations.append((ai, oi))
    return b


def contrast(a1, o1, a2, o2):
    # i think the A1 is O1 but the A2 is O2 .
    b = Builder()
    b.words("i think the", ["PRP", "VBP", "DT"])
    x = b.aspect(a1)
    b.words("is", ["VBZ"])
    y = b.opinion(o1)
    b.words("but the", ["CC", "DT"])
    u = b.aspect(a2)
    b.words("is", ["VBZ"])
    v = b.opinion(o2)
    b.words(".", ["."])
    b.relations += [(x, y), (u, v)]
    return b


def aside(a, o1, o2):
    # the A is O1 , and the store was O2 .   (second opinion targets no aspect)
    b = Builder()
    b.words("the", ["DT"])
    ai = b.aspect(a)
    b.words("is", ["VBZ"])
    oi = b.opinion(o1)
    b.words(", and the store was", [",", "CC", "DT", "NN", "VBD"])
    b.opinion(o2)
    b.words(".", ["."])
    b.relations.append((ai, oi))
    return b


def main():
    rng = random.Random(2017)
    reviews = [simple(ASPECTS[0], OPINIONS[0]).review("syn-00")]
    for i in range(1, 30):
        a1, a2 = rng.sample(ASPECTS, 2)
        o1, o2 = rng.sample(OPINIONS, 2)
        form = i % 4
        if form == 0:
            b = simple(a1, o1)
        elif form == 1:
            b = prenominal(a1, o1)
        elif form == 2:
            b = contrast(a1, o1, a2, o2)
        else:
            b = aside(a1, o1, o2)
        reviews.append(b.review(f"syn-{i:02d}"))
    out = open(sys.argv[1], "w") if len(sys.argv) > 1 else sys.stdout
    for r in reviews:
        out.write(json.dumps(r) + "\n")


if __name__ == "__main__":
    main()
