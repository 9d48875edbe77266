#!/usr/bin/env python3
"""Regenerates tests/data/fixture_corpus.jsonl (50 documents, 4 actors).

Deterministic: the output only depends on the seed below.
"""
import json
import random
import sys

SEED = 7

ACTORS = [
    ("amoreau", "Alice Moreau", "moreau-alice"),
    ("bsantoso", "Budi Santoso", "santoso-budi"),
    ("cwei", "Chen Wei", "wei-chen"),
    ("dkowalski", "Dana Kowalski", "kowalski-dana"),
]

# Pairs that actually co-author; other pairs only meet by accident.
COAUTHORS = [(0, 1), (1, 2), (2, 3)]

FILLER = (
    "network extraction social graph web search engine snippet query hit count "
    "similarity measure relation strength co-occurrence occurrence actor author "
    "paper journal conference proceedings data science information retrieval "
    "method unsupervised superficial evaluation precision recall corpus index "
    "university department faculty research group lecture seminar workshop "
    "analysis model framework algorithm result table figure study review"
).split()

SITES = [
    "https://publons.com/researcher/{num}/{slug}/",
    "https://scholar.example.org/citations/{num}/{slug}",
    "https://dblp.example.org/pid/{num}/{slug}.html",
    "https://news.example.com/{year}/{month}/{slug}-{num}",
    "https://conf.example.net/program/session-{num}?speaker={slug}",
]


def words(rng, n):
    return [rng.choice(FILLER) for _ in range(n)]


def mention(rng, actor, exact=True):
    name = actor[1]
    if exact:
        return name.split()
    first, last = name.split()
    return [last + ",", first]


def make_body(rng, actors_in_doc, length):
    body = words(rng, length)
    for actor in actors_in_doc:
        pos = rng.randrange(len(body) + 1)
        body[pos:pos] = mention(rng, actor, exact=rng.random() < 0.75)
    return " ".join(body)


def main(out):
    rng = random.Random(SEED)
    docs = []
    doc_id = 0
    # 30 documents on co-author pairs.
    for i in range(30):
        a, b = COAUTHORS[i % len(COAUTHORS)]
        actors = [ACTORS[a], ACTORS[b]]
        lead = actors[rng.randrange(2)]
        url = rng.choice(SITES).format(num=rng.randrange(1000, 9999), slug=lead[2],
                                       year=2018 + rng.randrange(4), month=rng.randrange(1, 13))
        title = f"{' '.join(words(rng, 3)).title()} by {lead[1]}"
        docs.append({"id": doc_id, "url": url, "title": title,
                     "body": make_body(rng, actors, rng.randrange(40, 160))})
        doc_id += 1
    # 14 single-actor documents.
    for i in range(14):
        actor = ACTORS[i % len(ACTORS)]
        url = rng.choice(SITES).format(num=rng.randrange(1000, 9999), slug=actor[2],
                                       year=2018 + rng.randrange(4), month=rng.randrange(1, 13))
        docs.append({"id": doc_id, "url": url, "title": " ".join(words(rng, 4)).title(),
                     "body": make_body(rng, [actor], rng.randrange(20, 120))})
        doc_id += 1
    # 4 accidental co-mentions of non-co-authors, 2 documents naming nobody.
    for a, b in [(0, 2), (0, 3), (1, 3), (0, 2)]:
        url = f"https://digest.example.org/weekly/{rng.randrange(100, 999)}/"
        docs.append({"id": doc_id, "url": url, "title": "Weekly Digest",
                     "body": make_body(rng, [ACTORS[a], ACTORS[b]], rng.randrange(60, 200))})
        doc_id += 1
    for _ in range(2):
        docs.append({"id": doc_id, "url": f"https://blog.example.com/post/{doc_id}", "title": "",
                     "body": " ".join(words(rng, rng.randrange(10, 60)))})
        doc_id += 1
    with open(out, "w", encoding="utf-8") as f:
        for d in docs:
            f.write(json.dumps(d, ensure_ascii=False) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "tests/data/fixture_corpus.jsonl")
