#!/usr/bin/env python3
"""Writes a synthetic pairwise-judgment fixture in the MT-Bench human
judgments JSONL layout (question_id, model_a, model_b, winner, judge,
conversation_a, conversation_b, turn).

The text is generated from small phrase banks so the file is reproducible
and license-free; it only mimics the schema, not the real content.
"""
import argparse
import json
import random

MODELS = ["gpt-4", "claude-v1", "gpt-3.5-turbo", "vicuna-13b-v1.2", "alpaca-13b", "llama-13b"]

TOPICS = {
    "writing": ["a travel blog post about hawaii", "a persuasive email to a friend", "a short poem about autumn",
                "a product description for a smart watch", "a thank you note to a teacher"],
    "roleplay": ["a detective solving a case", "a chef explaining a recipe", "a pirate captain giving orders",
                 "a doctor calming a patient", "a tour guide in rome"],
    "reasoning": ["why the sky looks blue", "how to split a bill fairly", "which bag holds more apples",
                  "who finished the race second", "what day comes after tomorrow"],
    "math": ["the area of a triangle", "the sum of the first ten primes", "the probability of two heads",
             "the slope of a line", "the value of x in a linear equation"],
    "coding": ["reversing a linked list", "finding duplicates in an array", "parsing a csv file",
               "writing a binary search", "counting words in a file"],
    "extraction": ["the main characters of a story", "the dates in a news report", "the prices in a receipt",
                   "the company names in an article", "the key points of a memo"],
    "stem": ["how vaccines train the immune system", "what causes ocean tides", "how solar panels make power",
             "why metals conduct heat", "how dna stores information"],
    "humanities": ["the causes of the french revolution", "the role of trade on the silk road",
                   "the themes of a famous novel", "the history of the printing press",
                   "the ideas of ancient stoic philosophy"],
}

QUESTION_FORMS = ["Explain {t}.", "Please describe {t} in simple terms.", "Can you help me with {t}?",
                  "Write a brief answer about {t}.", "Give a clear overview of {t}."]

OPENERS = ["sure", "certainly", "of course", "here is", "in short", "well", "great question", "to answer this"]
BODY = ["the key idea is", "first we note", "this works because", "an important detail is", "in practice",
        "for example", "as a result", "the main step is", "one common mistake is", "overall", "it helps to see",
        "a simple way to think about it is", "most people agree", "the evidence shows", "step by step"]
FILLER = ["the answer", "each part", "the process", "this method", "the final result", "the simple rule",
          "a clear example", "the whole system", "every case", "the main reason", "the correct value",
          "the basic pattern", "its structure", "the overall plan", "the given data"]
CLOSERS = ["hope this helps", "let me know if you need more", "that is the summary", "good luck",
           "feel free to ask", "this should be enough"]


def answer(rng, topic, lo, hi):
    words = []
    words += rng.choice(OPENERS).split()
    words += topic.split()[: rng.randint(1, 3)]
    while len(words) < rng.randint(lo, hi):
        words += rng.choice(BODY).split()
        words += rng.choice(FILLER).split()
    if rng.random() < 0.5:
        words += rng.choice(CLOSERS).split()
    words = words[:hi]
    text = " ".join(words)
    return text[0].upper() + text[1:] + "."


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--records", type=int, default=500)
    ap.add_argument("--ties", type=int, default=50, help="records marked as ties (skipped by the loader)")
    ap.add_argument("--min-words", type=int, default=8)
    ap.add_argument("--max-words", type=int, default=20)
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--out", required=True)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    tie_slots = set(rng.sample(range(args.records), args.ties))
    categories = sorted(TOPICS)
    with open(args.out, "w", encoding="utf-8") as f:
        for i in range(args.records):
            cat = categories[i % len(categories)]
            topic = rng.choice(TOPICS[cat])
            question = rng.choice(QUESTION_FORMS).format(t=topic)
            model_a, model_b = rng.sample(MODELS, 2)
            if i in tie_slots:
                winner = rng.choice(["tie", "tie (bothbad)"])
            else:
                winner = rng.choice(["model_a", "model_b"])
            rec = {
                "question_id": 81 + i,
                "model_a": model_a,
                "model_b": model_b,
                "winner": winner,
                "judge": "author_%d" % rng.randint(0, 5),
                "conversation_a": [
                    {"role": "user", "content": question},
                    {"role": "assistant", "content": answer(rng, topic, args.min_words, args.max_words)},
                ],
                "conversation_b": [
                    {"role": "user", "content": question},
                    {"role": "assistant", "content": answer(rng, topic, args.min_words, args.max_words)},
                ],
                "turn": 1,
            }
            f.write(json.dumps(rec) + "\n")


if __name__ == "__main__":
    main()
