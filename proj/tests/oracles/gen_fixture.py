#!/usr/bin/env python3
"""Writes the 500-record catalogue fixture and its schema files to tests/data."""

import csv
import json
import os
import random

OUT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "data")

FEATURES = [
    ("Name", "text"), ("Year", "integer"), ("Unit", "text"), ("Dialect", "text"),
    ("Tasks", "text_list"), ("Access", "text"), ("License", "text"), ("Host", "text"),
    ("Domain", "text_list"), ("Form", "text"), ("Venue", "text"), ("Ethical Risks", "text"),
    ("Script", "text"), ("Description", "text"), ("Abstract", "text"), ("Link", "text"),
]

DIALECTS = ["Algeria", "Bahrain", "Egypt", "Iraq", "Jordan", "Kuwait", "Lebanon", "Libya",
            "Morocco", "Oman", "Palestine", "Qatar", "Saudi Arabia", "Sudan", "Syria",
            "Tunisia", "Yemen", "mixed", "Modern Standard Arabic", "Classical Arabic"]
UNITS = ["sentences", "tokens", "documents", "hours", "images"]
TASKS = ["machine translation", "sentiment analysis", "dialect identification",
         "named entity recognition", "part of speech tagging", "speech recognition",
         "question answering", "topic classification", "offensive language detection"]
ACCESS = ["Free", "Upon-Request", "With-Fee"]
LICENSES = ["CC BY 4.0", "CC BY-SA 4.0", "MIT License", "Apache-2.0", "unknown", "custom"]
HOSTS = ["GitHub", "ELRA", "LDC", "zenodo", "Dropbox", "other", "Google Drive"]
DOMAINS = ["social media", "news articles", "reviews", "wikipedia", "books", "transcribed audio"]
FORMS = ["text", "spoken", "images"]
VENUES = ["ACL", "LREC", "EMNLP", "WANLP", "arXiv", "journal", "workshop"]
RISKS = ["Low", "Medium", "High"]
SCRIPTS = ["Arab", "Latn", "Arab-Latn"]
WORDS = ["corpus", "arabic", "dialect", "annotated", "speech", "tweets", "news", "parallel",
         "treebank", "lexicon", "benchmark", "emotion", "sarcasm", "poetry", "quran",
         "translation", "morphology", "crawled", "manually", "large", "multi", "domain"]


def handcrafted():
    base = {"Access": "Free", "License": "CC BY 4.0", "Host": "GitHub", "Form": "text",
            "Venue": "LREC", "Ethical Risks": "Low", "Script": "Arab"}
    rows = [
        dict(base, Name="Shami", Year="2018", Unit="sentences", Dialect="Syria",
             Tasks="dialect identification", Domain="social media",
             Description="Levantine dialect corpus, \"Shami\" sentences",
             Abstract="A corpus of Levantine dialects.\nCollected from social media.",
             Link="https://github.com/GU-CLASP/shami-corpus"),
        dict(base, Name="ANERCorp", Year="2007", Unit="tokens", Dialect="Modern Standard Arabic",
             Tasks="named entity recognition", Domain="news articles",
             Description="named entity annotated news", Abstract="", Link=""),
        dict(base, Name="LABR", Year="2018", Unit="documents", Dialect="mixed",
             Tasks="sentiment analysis, review rating", Domain="reviews",
             Description="large scale Arabic book reviews", Abstract="Book reviews from Goodreads.",
             Link="https://github.com/mohamedadaly/LABR"),
        dict(base, Name="Arabic Treebank", Year="2004", Unit="tokens", Dialect="Modern Standard Arabic",
             Tasks="part of speech tagging", Domain="news articles", Access="With-Fee", Host="LDC",
             License="custom", Description="", Abstract="", Link=""),
        dict(base, Name="Gulf Tweets", Year="2006", Unit="tokens", Dialect="Bahrain",
             Tasks="dialect identification,  sentiment analysis ,", Domain="social media",
             Description="tweets", Abstract="", Link=""),
        dict(base, Name="Algerian Speech", Year="2005", Unit="hours", Dialect="Algeria",
             Tasks="speech recognition", Domain="transcribed audio", Form="spoken",
             Description="", Abstract="", Link=""),
        dict(base, Name="Early Lexicon", Year="2001", Unit="tokens", Dialect="Classical Arabic",
             Tasks="", Domain="books", Description="", Abstract="", Link=""),
        dict(base, Name="Missing Year Corpus", Year="", Unit="sentences", Dialect="",
             Tasks="machine translation", Domain="", Description="", Abstract="", Link=""),
        dict(base, Name="مدونة عربية", Year="2002", Unit="documents", Dialect="Egypt",
             Tasks="topic classification", Domain="news articles",
             Description="نصوص إخبارية", Abstract="", Link=""),
    ]
    return rows


def generated(rng, i):
    def text(n):
        return " ".join(rng.choice(WORDS) for _ in range(n))

    def maybe(v, p=0.05):
        return "" if rng.random() < p else v

    tasks = rng.sample(TASKS, rng.randint(0, 3))
    domains = rng.sample(DOMAINS, rng.randint(1, 2))
    return {
        "Name": f"{text(2).title()} {i}",
        "Year": maybe(str(rng.randint(2001, 2022))),
        "Unit": maybe(rng.choice(UNITS)),
        "Dialect": maybe(rng.choice(DIALECTS)),
        "Tasks": ",".join(tasks),
        "Access": maybe(rng.choice(ACCESS)),
        "License": maybe(rng.choice(LICENSES)),
        "Host": maybe(rng.choice(HOSTS)),
        "Domain": ", ".join(domains),
        "Form": maybe(rng.choice(FORMS)),
        "Venue": maybe(rng.choice(VENUES)),
        "Ethical Risks": maybe(rng.choice(RISKS)),
        "Script": maybe(rng.choice(SCRIPTS)),
        "Description": maybe(text(rng.randint(3, 12)), 0.1),
        "Abstract": maybe(text(rng.randint(8, 30)), 0.2),
        "Link": maybe(f"https://example.org/datasets/{i}", 0.3),
    }


def main():
    rng = random.Random(2022)
    rows = handcrafted()
    while len(rows) < 500:
        rows.append(generated(rng, len(rows)))
    names = [n for n, _ in FEATURES]

    schema = {"features": [dict({"name": n, "kind": k}, **({"delimiter": ","} if k == "text_list" else {}))
                           for n, k in FEATURES]}
    with open(os.path.join(OUT, "schema.json"), "w") as f:
        json.dump(schema, f, indent=2, ensure_ascii=False)
        f.write("\n")

    schema12 = {"features": [f for f in schema["features"] if f["name"] not in
                             ("Description", "Abstract", "Link", "Ethical Risks")]}
    with open(os.path.join(OUT, "schema12.json"), "w") as f:
        json.dump(schema12, f, indent=2, ensure_ascii=False)
        f.write("\n")

    with open(os.path.join(OUT, "catalogue.csv"), "w", newline="", encoding="utf-8") as f:
        w = csv.DictWriter(f, fieldnames=names, lineterminator="\r\n")
        w.writeheader()
        for r in rows:
            w.writerow(r)

    # Same rows as a JSON array; integers and lists carry their native types.
    docs = []
    for r in rows:
        d = {}
        for n, k in FEATURES:
            v = r[n]
            if v.strip() == "":
                d[n] = None
            elif k == "integer":
                d[n] = int(v)
            elif k == "text_list":
                d[n] = [e.strip() for e in v.split(",") if e.strip()]
            else:
                d[n] = v
        docs.append(d)
    with open(os.path.join(OUT, "catalogue.json"), "w", encoding="utf-8") as f:
        json.dump(docs, f, indent=1, ensure_ascii=False)
        f.write("\n")


if __name__ == "__main__":
    main()
