#!/usr/bin/env python3
"""Writes the hermetic fixture corpus under tests/data/corpus.

The stub models are rule-based: entailment is entail-dominant when the
premise mentions a gold object, contradiction-dominant when it mentions a
non-gold object, and weakly contradictory otherwise, plus a few hand-set
exceptions so the outputs are not perfect. Rerunning the script reproduces
the committed files exactly.
"""

import json
import os
import re

HERE = os.path.dirname(os.path.abspath(__file__))
OUT = os.path.join(HERE, "corpus")
STAMP = "2024-01-15T00:00:00Z"

RELATIONS = {
    "PersonInstrument": {
        "name": "PersonInstrument", "domain_class": "Person", "range_classes": ["MusicalInstrument"],
        "t_search": "{X} plays instrument", "t_lm": "{X} plays {MASK}, which is an instrument.",
        "t_h": "{X} plays {Y}.", "t_qa": "What instruments does {X} play?",
        "sources": ["LM", "KG"], "T_lm": 0.05, "T_e": 0.5, "T_qa": 0.3, "optional_relation": True,
    },
    "CountryOfficialLanguage": {
        "name": "CountryOfficialLanguage", "domain_class": "Country", "range_classes": ["Language"],
        "t_search": "{X} official language", "t_lm": "The official language of {X} is {MASK}.",
        "t_h": "The official language of {X} is {Y}.", "t_qa": "What is the official language of {X}?",
        "sources": ["LM", "KG"], "T_lm": 0.05, "T_e": 0.5, "T_qa": 0.3, "optional_relation": False,
    },
    "PersonEmployer": {
        "name": "PersonEmployer", "domain_class": "Person", "range_classes": ["Organization"],
        "t_search": "{X} employer", "t_lm": "{X} is an employer at {MASK}, which is a company.",
        "t_h": "{X} works for {Y}.", "t_qa": "Who is the employer of {X}?",
        "sources": ["LM", "NER"], "T_lm": 0.05, "T_e": 0.5, "T_qa": 0.3, "optional_relation": False,
    },
}

RELATION_MAP = {"PersonInstrument": "instrument", "CountryOfficialLanguage": "official language",
                "PersonEmployer": "employer"}

KG = {
    "MusicalInstrument": ["guitar", "piano", "harmonica", "drums", "bass", "violin", "cello", "keyboard",
                          "saxophone", "trumpet"],
    "Language": ["English", "French", "German", "Spanish", "Italian", "Portuguese", "Dutch", "Romansh",
                 "Niuean", "Maori", "Hungarian", "Catalan"],
}

ORGS = ["Apple", "IBM", "Compaq", "Google", "Alphabet", "Stanford University", "NASA", "Microsoft",
        "Sun Microsystems", "MIT", "Hamilton Technologies", "Pixar", "NeXT", "Remington Rand",
        "United States Navy", "Tesla", "SpaceX", "Amazon", "Beatles"]
LOCS = ["Seattle", "Liverpool", "Alabama", "Europe", "South America", "Brussels", "South Pacific Ocean",
        "New Orleans", "Catalonia", "Bletchley Park"]

# (split, relation, subject, gold alias-sets, premises, fill-mask tokens)
PAIRS = [
    # PersonInstrument, evaluation split
    ("test", "PersonInstrument", "Jimi Hendrix", [["guitar"]], [
        "Jimi Hendrix plays guitar with his teeth in some live shows.",
        "Jimi Hendrix was an American musician born in Seattle.",
        "Jimi Hendrix is widely regarded as one of the greatest guitarists."],
     [("guitar", 0.62), ("bass", 0.11), ("drums", 0.06), ("the", 0.04), ("piano", 0.03)]),
    ("test", "PersonInstrument", "Bob Dylan", [["guitar"], ["harmonica"], ["piano"]], [
        "Bob Dylan plays guitar and harmonica at the same time using a neck rack.",
        "Bob Dylan recorded several songs on piano in the late sixties.",
        "Bob Dylan won the Nobel Prize in Literature in 2016."],
     [("guitar", 0.41), ("harmonica", 0.22), ("piano", 0.09), ("drums", 0.05), ("a", 0.04)]),
    ("test", "PersonInstrument", "Yo-Yo Ma", [["cello"]], [
        "Yo-Yo Ma plays cello with orchestras around the world.",
        "Yo-Yo Ma studied at the Juilliard School and Harvard.",
        "Yo-Yo Ma has also recorded music written for piano and cello."],
     [("cello", 0.35), ("violin", 0.2), ("piano", 0.15), ("guitar", 0.05)]),
    ("test", "PersonInstrument", "Ringo Starr", [["drums"]], [
        "Ringo Starr plays drums for the Beatles.",
        "Ringo Starr sometimes sang lead vocals and played piano on demos.",
        "Ringo Starr was born in Liverpool in 1940."],
     [("drums", 0.5), ("guitar", 0.2), ("piano", 0.1), ("bass", 0.05)]),
    ("test", "PersonInstrument", "Alan Turing", [], [
        "Alan Turing was a mathematician and computer scientist.",
        "Alan Turing enjoyed running long distances.",
        "Alan Turing worked at Bletchley Park during the war."],
     [("piano", 0.15), ("violin", 0.1), ("guitar", 0.08)]),
    ("test", "PersonInstrument", "Marie Curie", [], [
        "Marie Curie was a physicist and chemist who conducted research on radioactivity.",
        "Marie Curie never took up the piano, preferring her laboratory.",
        "Marie Curie won two Nobel Prizes."],
     [("piano", 0.2), ("violin", 0.1)]),
    ("test", "PersonInstrument", "Ludwig van Beethoven", [["piano"]], [],
     [("piano", 0.7), ("violin", 0.1)]),
    # PersonInstrument, training split
    ("train", "PersonInstrument", "John Lennon", [["guitar"], ["piano"], ["harmonica"]], [
        "John Lennon plays guitar, keyboard and harmonica on many Beatles recordings.",
        "John Lennon learned piano as a teenager and rarely played drums.",
        "John Lennon was an English singer and songwriter."],
     [("guitar", 0.4), ("drums", 0.2), ("piano", 0.15), ("the", 0.05), ("bass", 0.04)]),
    ("train", "PersonInstrument", "Paul McCartney", [["bass"], ["guitar"], ["piano"]], [
        "Paul McCartney plays bass guitar and also piano.",
        "Paul McCartney wrote Yesterday."],
     [("bass", 0.3), ("guitar", 0.25), ("piano", 0.1), ("drums", 0.08)]),
    ("train", "PersonInstrument", "Miles Davis", [["trumpet"]], [
        "Miles Davis plays trumpet in the cool jazz style.",
        "Miles Davis recorded Kind of Blue in 1959."],
     [("trumpet", 0.5), ("saxophone", 0.2), ("piano", 0.05)]),
    ("train", "PersonInstrument", "Elton John", [["piano"]], [
        "Elton John plays piano while singing his hits."],
     [("piano", 0.6), ("guitar", 0.1)]),
    ("train", "PersonInstrument", "Louis Armstrong", [["trumpet"]], [
        "Louis Armstrong was a jazz trumpeter and singer from New Orleans.",
        "Louis Armstrong plays trumpet on West End Blues."],
     [("trumpet", 0.55), ("saxophone", 0.1)]),
    ("train", "PersonInstrument", "Isaac Newton", [], [
        "Isaac Newton formulated the laws of motion."],
     [("piano", 0.1)]),
    # CountryOfficialLanguage, evaluation split
    ("test", "CountryOfficialLanguage", "Niue", [["Niuean", "Niuean language"], ["English"]], [
        "Niue has two official languages: Niuean and English.",
        "The official language of Niue is Niuean language, a Polynesian tongue.",
        "Niue is an island country in the South Pacific Ocean."],
     [("English", 0.5), ("French", 0.1), ("Maori", 0.08), ("Niuean", 0.05)]),
    ("test", "CountryOfficialLanguage", "Switzerland", [["German"], ["French"], ["Italian"], ["Romansh"]], [
        "Switzerland has four national languages: German, French, Italian and Romansh.",
        "Switzerland is a landlocked country in Europe.",
        "Most people in Switzerland speak German or French."],
     [("German", 0.4), ("French", 0.3), ("Italian", 0.1), ("English", 0.05), ("Romansh", 0.01)]),
    ("test", "CountryOfficialLanguage", "France", [["French"]], [
        "The official language of France is French.",
        "France is a country in Western Europe.",
        "English is widely taught in French schools."],
     [("French", 0.8), ("English", 0.05)]),
    ("test", "CountryOfficialLanguage", "Brazil", [["Portuguese"]], [
        "Portuguese is the official language of Brazil.",
        "Brazil is the largest country in South America.",
        "Spanish is spoken near the borders of Brazil."],
     [("Portuguese", 0.6), ("Spanish", 0.2), ("English", 0.05)]),
    ("test", "CountryOfficialLanguage", "Belgium", [["Dutch"], ["French"], ["German"]], [
        "Belgium has three official languages: Dutch, French and German.",
        "Belgium is a federal state in Western Europe.",
        "Brussels is officially bilingual in French and Dutch."],
     [("French", 0.5), ("Dutch", 0.2), ("German", 0.1), ("English", 0.05)]),
    # CountryOfficialLanguage, training split
    ("train", "CountryOfficialLanguage", "Germany", [["German"]], [
        "German is the official language of Germany."],
     [("German", 0.8), ("English", 0.1)]),
    ("train", "CountryOfficialLanguage", "Austria", [["German"]], [
        "The official language of Austria is German.",
        "Hungarian and Croatian are regional languages in Austria."],
     [("German", 0.7), ("Hungarian", 0.05)]),
    ("train", "CountryOfficialLanguage", "Canada", [["English"], ["French"]], [
        "Canada has two official languages, English and French."],
     [("English", 0.6), ("French", 0.3)]),
    ("train", "CountryOfficialLanguage", "Spain", [["Spanish"]], [
        "Spanish is the official language of Spain.",
        "Catalan is co-official in Catalonia, Spain."],
     [("Spanish", 0.7), ("Catalan", 0.1)]),
    ("train", "CountryOfficialLanguage", "New Zealand", [["English"], ["Maori"]], [
        "English is the most spoken language in New Zealand, and Maori is also official.",
        "Maori became an official language of New Zealand in 1987."],
     [("English", 0.6), ("Maori", 0.2)]),
    # PersonEmployer, evaluation split
    ("test", "PersonEmployer", "Tim Cook", [["Apple"], ["IBM"]], [
        "Tim Cook is the chief executive officer of Apple.",
        "Before joining Apple, Tim Cook worked at IBM and Compaq.",
        "Tim Cook was born in Alabama."],
     [("Apple", 0.5), ("Google", 0.1), ("Microsoft", 0.05)]),
    ("test", "PersonEmployer", "Sundar Pichai", [["Google"]], [
        "Sundar Pichai is the CEO of Google and Alphabet.",
        "Sundar Pichai joined Google in 2004.",
        "Sundar Pichai studied at Stanford University."],
     [("Google", 0.6), ("Microsoft", 0.1)]),
    ("test", "PersonEmployer", "Katherine Johnson", [["NASA"]], [
        "Katherine Johnson worked for NASA as a mathematician.",
        "Katherine Johnson calculated trajectories for the Apollo program.",
        "Katherine Johnson was awarded the Presidential Medal of Freedom."],
     [("IBM", 0.2), ("NASA", 0.1)]),
    ("test", "PersonEmployer", "Satya Nadella", [["Microsoft"]], [
        "Satya Nadella is the chairman and CEO of Microsoft.",
        "Satya Nadella previously worked at Sun Microsystems.",
        "Satya Nadella was born in Hyderabad."],
     [("Microsoft", 0.7), ("Google", 0.1)]),
    ("test", "PersonEmployer", "Margaret Hamilton", [["NASA"], ["MIT"]], [
        "Margaret Hamilton led the software team at MIT for NASA's Apollo missions.",
        "Margaret Hamilton founded Hamilton Technologies."],
     [("Google", 0.1), ("IBM", 0.1), ("NASA", 0.05)]),
    # PersonEmployer, training split
    ("train", "PersonEmployer", "Steve Jobs", [["Apple"], ["Pixar"]], [
        "Steve Jobs co-founded Apple and later led Pixar.",
        "Steve Jobs was fired from Apple in 1985 and founded NeXT."],
     [("Apple", 0.5), ("Microsoft", 0.1), ("NeXT", 0.02)]),
    ("train", "PersonEmployer", "Larry Page", [["Google"]], [
        "Larry Page co-founded Google with Sergey Brin."],
     [("Google", 0.6), ("Yahoo", 0.1)]),
    ("train", "PersonEmployer", "Grace Hopper", [["Remington Rand"], ["United States Navy"]], [
        "Grace Hopper worked at Remington Rand on the UNIVAC I computer.",
        "Grace Hopper served in the United States Navy for decades."],
     [("IBM", 0.2), ("Harvard", 0.1), ("Navy", 0.05)]),
    ("train", "PersonEmployer", "Elon Musk", [["Tesla"], ["SpaceX"]], [
        "Elon Musk leads Tesla, SpaceX and other companies."],
     [("Tesla", 0.4), ("PayPal", 0.2), ("Google", 0.05)]),
    ("train", "PersonEmployer", "Jeff Bezos", [["Amazon"]], [
        "Jeff Bezos founded Amazon in 1994 in Seattle."],
     [("Amazon", 0.7), ("Microsoft", 0.1)]),
]

# Deliberate stub-model mistakes: (subject, premise index, object) -> logits.
ENTAIL_OVERRIDES = {
    ("Ringo Starr", 1, "piano"): (3.0, -3.0, 0.0),      # gold is incomplete; the model agrees with the text
    ("Belgium", 0, "German"): (0.0, 0.0, 3.0),          # missed entailment
    ("Tim Cook", 1, "Compaq"): (3.0, -3.0, 0.0),        # true in the text, absent from gold
}

ENTAIL, CONTRA, WEAK = (4.0, -4.0, 0.0), (-4.0, 4.0, 0.0), (-0.5, 0.5, 1.0)


def mention_spans(text, needle):
    needle = needle.strip().lower()
    if not needle:
        return []
    hay = text.lower()
    spans, pos = [], hay.find(needle)
    while pos != -1:
        end = pos + len(needle)
        left = pos == 0 or not hay[pos - 1].isalnum()
        right = end == len(hay) or not hay[end].isalnum()
        if left and right:
            spans.append((pos, end))
        pos = hay.find(needle, pos + 1)
    return spans


def mentions(text, needle):
    return bool(mention_spans(text, needle))


def is_gold(obj, gold):
    return any(obj.strip().lower() == a.strip().lower() for g in gold for a in g)


def render(tmpl, subject, obj=None):
    out = tmpl.replace("{X}", subject)
    return out.replace("{Y}", obj) if obj is not None else out


def ner_spans(text, subject):
    found = []
    for label, names in (("ORG", ORGS), ("LOC", LOCS), ("PER", [subject])):
        for name in names:
            for s, e in mention_spans(text, name):
                found.append((s, e, label))
    found.sort(key=lambda x: (x[0], -(x[1] - x[0])))
    out, last_end = [], -1
    for s, e, label in found:
        if s >= last_end:
            out.append({"surface": text[s:e], "label": label, "start": s, "end": e})
            last_end = e
    return out


def best_window(text, gold):
    tokens = [(m.start(), m.end()) for m in re.finditer(r"\S+", text)]
    occ = []
    for gi, aliases in enumerate(gold):
        for a in aliases:
            for s, e in mention_spans(text, a):
                first = next(i for i, t in enumerate(tokens) if t[1] > s)
                last = max(i for i, t in enumerate(tokens) if t[0] < e)
                occ.append((s, e, gi, first, last))
    occ.sort()
    best = (0, None)
    for i in range(len(occ)):
        seen, reach, end = set(), occ[i][4], occ[i][1]
        for j in range(i, len(occ)):
            if j > i:
                if occ[j][3] > reach + 4:
                    break
                reach, end = max(reach, occ[j][4]), max(end, occ[j][1])
            seen.add(occ[j][2])
            if len(seen) > best[0]:
                best = (len(seen), (occ[i][0], end))
    return best


def main():
    os.makedirs(OUT, exist_ok=True)
    fixtures = {"search": {}, "fill_mask": {}, "entail": {"entries": []}, "ner": {}, "qa": {"entries": [],
                "default": {"answer": "", "score": 0.0}}, "relext": {}, "sparql": KG}
    cache_rows, test_rows, train_rows = [], [], []
    entail_seen = set()

    for split, rel, subject, gold, premises, tokens in PAIRS:
        schema = RELATIONS[rel]
        row = {"subject": subject, "relation": rel, "objects": gold}
        (test_rows if split == "test" else train_rows).append(row)

        query = render(schema["t_search"], subject)
        slug = subject.lower().replace(" ", "-")
        hits = [{"title": f"{subject} - Reference {i + 1}", "url": f"https://example.org/{slug}/{i + 1}",
                 "snippet": p} for i, p in enumerate(premises)]
        fixtures["search"][query] = hits
        if not hits:
            cache_rows.append({"query": query, "rank": 0})
        for i, h in enumerate(hits):
            cache_rows.append({"query": query, "rank": i + 1, "title": h["title"], "url": h["url"],
                               "snippet": h["snippet"], "retrieved_at": STAMP})

        prompt = render(schema["t_lm"], subject).replace("{MASK}", "{MASK}")
        fixtures["fill_mask"][prompt] = [{"token": t, "score": s} for t, s in tokens]

        # Every surface the pipeline can put into a hypothesis for this pair.
        surfaces = {t for t, _ in tokens}
        for cls in schema["range_classes"]:
            surfaces.update(KG.get(cls, []))
        for p in premises:
            spans = ner_spans(p, subject)
            fixtures["ner"][p] = spans
            surfaces.update(s["surface"] for s in spans)
        for pi, p in enumerate(premises):
            for obj in sorted(surfaces):
                if not any(mentions(q, obj) for q in premises):
                    continue
                hyp = render(schema["t_h"], subject, obj)
                if (p, hyp) in entail_seen:
                    continue
                entail_seen.add((p, hyp))
                if (subject, pi, obj) in ENTAIL_OVERRIDES:
                    e, c, n = ENTAIL_OVERRIDES[(subject, pi, obj)]
                elif mentions(p, obj):
                    e, c, n = ENTAIL if is_gold(obj, gold) else CONTRA
                else:
                    e, c, n = WEAK
                fixtures["entail"]["entries"].append(
                    {"premise": p, "hypothesis": hyp, "entail": e, "contradiction": c, "neutral": n})

        # QA stub: the gold window when the passage has one, else a range
        # instance mentioned in the passage at low confidence.
        question = render(schema["t_qa"], subject)
        range_names = [x for cls in schema["range_classes"] for x in KG.get(cls, [])] + ORGS
        for p in premises:
            count, span = best_window(p, gold)
            if count:
                s, e = span
                entry = {"answer": p[s:e], "score": 0.9, "start": s, "end": e}
            else:
                hit = next(((s, e) for name in range_names for s, e in mention_spans(p, name)
                            if not mentions(subject, name)), None)
                if hit:
                    entry = {"answer": p[hit[0]:hit[1]], "score": 0.4, "start": hit[0], "end": hit[1]}
                else:
                    entry = {"answer": "", "score": 0.1}
            fixtures["qa"]["entries"].append({"question": question, "context": p, **entry})

        # RE stub: every mentioned range instance under the mapped label, gold or not.
        label = RELATION_MAP[rel]
        for p in premises:
            triples = []
            names = sorted({x for x in range_names if mentions(p, x) and not mentions(subject, x)})
            for name in names:
                s, e = mention_spans(p, name)[0]
                triples.append({"subject": subject, "relation": label, "object": p[s:e]})
            if "born in" in p:
                triples.append({"subject": subject, "relation": "place of birth", "object": p.split("born in ")[1].rstrip(".")})
            fixtures["relext"][p] = triples

    def dump_jsonl(name, rows):
        with open(os.path.join(OUT, name), "w", encoding="utf-8") as f:
            for r in rows:
                f.write(json.dumps(r, ensure_ascii=False) + "\n")

    def dump_json(name, doc):
        with open(os.path.join(OUT, name), "w", encoding="utf-8") as f:
            f.write(json.dumps(doc, indent=2, ensure_ascii=False) + "\n")

    dump_jsonl("test.jsonl", test_rows)
    dump_jsonl("train.jsonl", train_rows)
    dump_jsonl("premises.jsonl", sorted(cache_rows, key=lambda r: (r["query"], r["rank"])))
    dump_json("fixtures.json", fixtures)
    dump_json("relations.json", {"ner_class_labels": {"Organization": "ORG"},
                                 "relations": list(RELATIONS.values())})
    dump_json("relation_map.json", RELATION_MAP)
    dump_json("config.json", {
        "relations": "relations.json", "dataset": "test.jsonl", "train_dataset": "train.jsonl",
        "premise_cache": "premises.jsonl", "stoplist": "../../../data/stopwords_en.txt",
        "relation_map": "relation_map.json", "output_dir": "out", "k": 3, "top_n": 100, "seed": 7,
        "regime": {"fraction": 0.4, "repetitions": 3},
        "backends": {"fixture": "fixtures.json"}})


if __name__ == "__main__":
    main()
