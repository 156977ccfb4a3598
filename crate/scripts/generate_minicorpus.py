#!/usr/bin/env python3
"""Generate the bundled BBC-style mini-corpus (deterministic, seed 20220307).

The first five rows reproduce the header rows of the public BBC News RSS
dataset verbatim; the remainder are synthetic descriptions assembled from
news-style templates with a controlled mix of positive, negative, neutral and
mixed sentiment.

Usage: generate_minicorpus.py [--rows N] [--out data/bbc_news_mini.csv]
"""
import argparse
import csv
import random
from datetime import datetime, timedelta

SEED = 20220307

HEAD = [
    ("Ukraine: Angry Zelensky vows to punish Russian...", "Mon, 07 Mar 2022 08:01:56 GMT",
     "https://www.bbc.co.uk/news/world-europe-60638042",
     "https://www.bbc.co.uk/news/world-europe-606380...",
     "The Ukrainian president says the country will ..."),
    ("War in Ukraine: Taking cover in a town under a...", "Sun, 06 Mar 2022 22:49:58 GMT",
     "https://www.bbc.co.uk/news/world-europe-60641873",
     "https://www.bbc.co.uk/news/world-europe-606418...",
     "Jeremy Bowen was on the frontline in Irpin, as..."),
    ("Ukraine war 'catastrophic for global food'", "Mon, 07 Mar 2022 00:14:42 GMT",
     "https://www.bbc.co.uk/news/business-60623941",
     "https://www.bbc.co.uk/news/business-60623941?a...",
     "One of the world's biggest fertiliser firms sa..."),
    ("Manchester Arena bombing: Saffie Roussos's par...", "Mon, 07 Mar 2022 00:05:40 GMT",
     "https://www.bbc.co.uk/news/uk-60579079",
     "https://www.bbc.co.uk/news/uk-60579079?at_medi...",
     "The parents of the Manchester Arena bombing's ..."),
    ("Ukraine conflict: Oil price soars to highest l...", "Mon, 07 Mar 2022 08:15:53 GMT",
     "https://www.bbc.co.uk/news/business-60642786",
     "https://www.bbc.co.uk/news/business-60642786?a...",
     "Consumers are feeling the impact of higher ene..."),
]

SECTIONS = ["world-europe", "uk", "business", "sport/football", "health", "technology",
            "uk-politics", "science-environment", "entertainment-arts", "uk-england-london"]

TOPICS = ["Ukraine war", "Covid", "Cost of living", "Premier League", "Climate", "NHS",
          "Energy crisis", "Six Nations", "UK politics", "Tech", "Education", "Housing",
          "Champions League", "Weather", "Music", "Transport"]

SUBJECTS = ["The prime minister", "Scientists", "Local residents", "The England team",
            "Police", "Health officials", "The central bank", "Fans", "Campaigners",
            "Ukrainian forces", "Teachers", "The charity", "Hospital staff", "The council",
            "Small businesses", "The club", "Researchers", "Farmers", "The government",
            "Volunteers", "Energy firms", "Families", "The manager", "Rescue teams",
            "Nurses", "Students", "The mayor", "Investors", "Shoppers", "The minister"]

POS_PRED = ["celebrate a historic win", "welcome the breakthrough in talks",
            "praise the successful rescue of the crew", "are delighted with the excellent results",
            "hail a remarkable recovery", "enjoy a brilliant victory at home",
            "say the new plan is a great success", "are thrilled by the generous donation",
            "win an award for outstanding work", "share their joy after the reunion",
            "applaud the brave volunteers", "report strong growth and improved confidence",
            "are proud of the wonderful achievement", "welcome good news for patients",
            "celebrate a happy return to the stage", "praise the kind support of neighbours",
            "secure a superb win to lift the trophy", "say hope is growing for a peaceful future",
            "are excited about the promising new treatment", "thank the heroes who saved lives"]

NEG_PRED = ["condemn the deadly attack", "warn of a worsening crisis",
            "mourn the victims of the tragic crash", "fear the disaster will kill more people",
            "face a painful defeat", "are angry about the shocking failure",
            "report a terrible loss of jobs", "criticise the corrupt deal",
            "suffer a bitter blow after the injury", "warn of serious danger from the storm",
            "are horrified by the brutal violence", "struggle with rising debt and poverty",
            "say the war has destroyed their homes", "blame officials for the fatal mistake",
            "are worried about the threat of more attacks", "fight to stop the cruel abuse",
            "protest against the unfair cuts", "suffer a humiliating loss in the final",
            "warn that panic and fear are spreading", "reject the bad decision after the scandal"]

NEU_PRED = ["are set to meet on Tuesday", "publish the annual figures",
            "announce the timetable for the vote", "will travel to Brussels next week",
            "outline plans for the new building", "release details of the survey",
            "are expected to confirm the schedule", "discuss the budget in parliament",
            "move to a different office in the city", "update the guidance for schools",
            "review the rules on parking", "prepare for the start of the season",
            "list the changes to the train timetable", "present the report to the committee",
            "open a consultation on the proposals", "hold a meeting with union leaders",
            "confirm the date of the election", "measure rainfall across the region",
            "record the number of visitors", "sign the documents at the embassy"]

NEG_TAIL = ["despite the ongoing war", "amid fears of further violence",
            "after a deadly week", "as the crisis deepens", "following the attack"]
POS_TAIL = ["to the delight of supporters", "in a hopeful sign", "with great relief",
            "after a brilliant campaign", "as confidence improves"]
NEU_TAIL = ["on Monday", "this week", "according to a statement", "in London",
            "officials said", "ahead of the summer"]

BOOSTERS = ["very", "extremely", "deeply", "really", "hugely"]


def description(rng, kind):
    subj = rng.choice(SUBJECTS)
    if kind == "pos":
        pred = rng.choice(POS_PRED)
        tail = rng.choice(POS_TAIL + NEU_TAIL)
    elif kind == "neg":
        pred = rng.choice(NEG_PRED)
        tail = rng.choice(NEG_TAIL + NEU_TAIL)
    elif kind == "neu":
        pred = rng.choice(NEU_PRED)
        tail = rng.choice(NEU_TAIL)
    else:
        first, second = rng.sample(["pos", "neg", "neu"], 2)
        a = description(rng, first).rstrip(".")
        b = description(rng, second)
        return f"{a}, but {b[0].lower()}{b[1:]}"
    words = pred.split()
    if rng.random() < 0.15 and kind != "neu":
        words.insert(1, rng.choice(BOOSTERS))
    text = f"{subj} {' '.join(words)} {tail}."
    if rng.random() < 0.05 and kind != "neu":
        text = text[:-1] + "!"
    if rng.random() < 0.06 and kind != "neu":
        text = text.replace(" do ", " do not ").replace(" are ", " are not ", 1)
    return text


def headline(rng, desc):
    words = desc.split()
    short = " ".join(words[:min(len(words), rng.randint(4, 8))]).rstrip(",.")
    return f"{rng.choice(TOPICS)}: {short}"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--rows", type=int, default=900)
    ap.add_argument("--out", default="data/bbc_news_mini.csv")
    a = ap.parse_args()
    rng = random.Random(SEED)
    start = datetime(2022, 3, 7, 9, 0, 0)
    with open(a.out, "w", encoding="utf-8", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["title", "pubDate", "guid", "link", "description"])
        for row in HEAD:
            w.writerow(row)
        kinds = ["pos"] * 30 + ["neg"] * 34 + ["neu"] * 26 + ["mix"] * 10
        for i in range(a.rows - len(HEAD)):
            kind = rng.choice(kinds)
            desc = description(rng, kind)
            when = start + timedelta(minutes=37 * i + rng.randint(0, 30))
            article = 60650000 + i * 7 + rng.randint(0, 6)
            url = f"https://www.bbc.co.uk/news/{rng.choice(SECTIONS)}-{article}"
            w.writerow([headline(rng, desc), when.strftime("%a, %d %b %Y %H:%M:%S GMT"),
                        url, f"{url}?at_medium=RSS&at_campaign=KARANGA", desc])


if __name__ == "__main__":
    main()
