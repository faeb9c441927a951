#!/usr/bin/env python3
"""Generate the bundled 60-paper synthetic corpus under fixtures/mini.

Output layout is what `termdrift ingest --from-text` reads:

    fixtures/mini/<VENUE>-<YEAR>/papers.jsonl
    fixtures/mini/<VENUE>-<YEAR>/<paper_id>.txt   (pages split by form feeds)

Also writes fixtures/mini-truth/bodies.json: the body text each paper should
reduce to (footers dropped, cut before the last references heading). The
oracle counts against these bodies, never against the tool's output.

Deterministic: rerunning produces identical bytes.
"""

import json
import random
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
OUT = ROOT / "fixtures" / "mini"
TRUTH = ROOT / "fixtures" / "mini-truth"

CONFERENCES = [
    ("ACL", 2020, "acl", 0.45, "Proceedings of the Annual Meeting 2020, pages 1-9",
     {"BERT": 5, "RoBERTa": 2, "RNN": 3, "CNN": 3, "GPT-2": 1, "mBERT": 1, "DistilBERT": 1}),
    ("EMNLP", 2021, "emnlp", 0.65, "Proceedings of the Conference on Empirical Methods 2021, pages 1-10",
     {"BERT": 4, "RoBERTa": 3, "T5": 2, "T5-3B": 1, "GPT-2": 2, "GPT3": 1, "GPT-3": 1, "mBERT": 1}),
    ("NAACL", 2022, "naacl", 0.85, "Proceedings of the North American Chapter 2022, pages 1-11",
     {"GPT-3": 3, "ChatGPT": 1, "chatgpt": 1, "GPT-3.5": 1, "T5": 2, "Flan-T5": 2, "BERT": 2,
      "LLaMA": 1, "Llama-2": 1, "Alpaca": 1, "GPT-4": 1}),
]
PAPERS_PER_CONF = 20

LM_SENTENCES = [
    "We fine-tune a pretrained language model on the task.",
    "Large Language Models (LLMs) show strong few-shot ability.",
    "Recent PLMs encode rich syntactic knowledge.",
    "Our language modeling objective follows prior work.",
    "An LLM-based annotator labels the remaining data.",
    "We probe how a masked Language Model handles negation.",
]
MODEL_TEMPLATES = [
    "We compare against {m} as a strong baseline.",
    "Results with {m} are reported in Table 2.",
    "{m} was trained with default hyperparameters.",
    "Replacing the encoder with {m} (base size) helps.",
]
NEUTRAL = [
    "The dataset contains 12k annotated sentences.",
    "We report accuracy averaged over five seeds.",
    "Annotators agreed on 87% of the items.",
    "Our SCNN layer and the XLLM toolkit are described below.",
    "The BLEU score improved by 1.2 points.",
    "References to prior work are given in Section 2.",
    "Training takes four hours on a single GPU.",
]
REFERENCES = [
    "Devlin et al. 2019. BERT: Pre-training of deep bidirectional transformers for language understanding.",
    "Brown et al. 2020. Language models are few-shot learners (GPT-3).",
    "Raffel et al. 2020. Exploring the limits of transfer learning with T5.",
    "Touvron et al. 2023. LLaMA: open and efficient foundation LLMs.",
]
TOPICS = ["parsing", "summarization", "question answering", "machine translation",
          "sentiment analysis", "entity linking", "dialogue", "fact checking"]


def weighted_choice(rng, weights):
    names = sorted(weights)
    return rng.choices(names, weights=[weights[n] for n in names], k=1)[0]


def make_paper(rng, conf, idx):
    venue, year, slug, lm_share, footer, model_weights = conf
    pid = f"mini-{slug}-{idx:04d}"
    lm_related = rng.random() < lm_share
    topic = rng.choice(TOPICS)

    used = set()

    def unique(line):
        # a line repeated on half the pages would be taken for a footer
        n = 2
        out = line
        while out in used:
            out = f"{line[:-1]} (again, {n})."
            n += 1
        used.add(out)
        return out

    def model_sentence():
        return unique(rng.choice(MODEL_TEMPLATES).format(m=weighted_choice(rng, model_weights)))

    title = f"A Study of {topic.title()}"
    if lm_related and rng.random() < 0.3:
        title += f" with {weighted_choice(rng, model_weights)}"

    abstract = [unique(f"We study {topic}.")]
    if lm_related:
        abstract.append(unique(rng.choice(LM_SENTENCES)))
    abstract.append(unique(rng.choice(NEUTRAL)))

    def section_body():
        out = []
        for _ in range(rng.randint(2, 4)):
            r = rng.random()
            if lm_related and r < 0.35:
                out.append(unique(rng.choice(LM_SENTENCES)))
            elif r < 0.6 and (lm_related or rng.random() < 0.4):
                out.append(model_sentence())
            else:
                out.append(unique(rng.choice(NEUTRAL)))
        return out

    pages = [
        [title, "Anonymous Authors", "Abstract", *abstract, "1 Introduction", *section_body()],
        ["2 Method", *section_body(), "3 Experiments", *section_body()],
        ["4 Conclusion", *section_body()],
    ]
    body_lines = [line for page in pages for line in page]

    # trailing matter that must not be counted
    ref_heading = "References"
    if idx % 10 == 7:
        ref_heading = "Bibliography"
    elif idx % 10 == 3:
        ref_heading = "5 References"
    has_refs = idx != 13
    if has_refs:
        tail = [ref_heading, *rng.sample(REFERENCES, 2)]
        if idx % 6 == 0:
            tail += ["A Appendix", model_sentence(), unique(rng.choice(LM_SENTENCES))]
        pages[-1].extend(tail)

    raw = "\x0c".join("\n".join(page + [footer]) + "\n" for page in pages)
    body = "\n".join(body_lines) + "\n"
    meta = {"paper_id": pid, "title": title, "abstract": " ".join(abstract)}
    return pid, raw, body, meta


def main():
    rng = random.Random(20240601)
    bodies = {}
    for conf in CONFERENCES:
        venue, year = conf[0], conf[1]
        d = OUT / f"{venue}-{year}"
        d.mkdir(parents=True, exist_ok=True)
        metas = []
        for idx in range(1, PAPERS_PER_CONF + 1):
            pid, raw, body, meta = make_paper(rng, conf, idx)
            (d / f"{pid}.txt").write_text(raw, encoding="utf-8")
            bodies[pid] = {"venue": venue, "year": year, "body": body}
            # one paper per conference ships without a metadata line
            if idx != 5:
                metas.append(meta)
        with open(d / "papers.jsonl", "w", encoding="utf-8") as f:
            for m in metas:
                f.write(json.dumps(m, sort_keys=True) + "\n")
    TRUTH.mkdir(parents=True, exist_ok=True)
    with open(TRUTH / "bodies.json", "w", encoding="utf-8") as f:
        json.dump(bodies, f, indent=1, sort_keys=True)
        f.write("\n")


if __name__ == "__main__":
    main()
