#!/usr/bin/env python3
"""Regenerate the bundled TSV resources in src/clinperturb/data/.

Run from the repository root:  python scripts/gen_resources.py
"""

from __future__ import annotations

import math
from pathlib import Path

DATA = Path(__file__).resolve().parent.parent / "src" / "clinperturb" / "data"

# ---------------------------------------------------------------------------
# QWERTY adjacency from key geometry: rows are staggered; two keys are
# adjacent when their center distance is below the diagonal threshold.

ROWS = ["qwertyuiop", "asdfghjkl", "zxcvbnm"]
OFFSETS = [0.0, 0.25, 0.75]
THRESHOLD = 1.26


def keyboard_rows() -> list[str]:
    coords = {}
    for r, row in enumerate(ROWS):
        for c, ch in enumerate(row):
            coords[ch] = (OFFSETS[r] + c, float(r))
    lines = []
    for ch in sorted(coords):
        x, y = coords[ch]
        neigh = sorted(
            other
            for other, (ox, oy) in coords.items()
            if other != ch and math.hypot(ox - x, oy - y) <= THRESHOLD
        )
        lines.append(f"{ch}\t{' '.join(neigh)}")
    return lines


# ---------------------------------------------------------------------------
# Verb lexicon: base / 3rd-person-singular / present-plural / past / irregular

IRREGULARS = [
    # base, 3sg, plural, past
    ("be", "is", "are", "was"),
    ("have", "has", "have", "had"),
    ("do", "does", "do", "did"),
    ("go", "goes", "go", "went"),
    ("come", "comes", "come", "came"),
    ("become", "becomes", "become", "became"),
    ("begin", "begins", "begin", "began"),
    ("bleed", "bleeds", "bleed", "bled"),
    ("break", "breaks", "break", "broke"),
    ("bring", "brings", "bring", "brought"),
    ("buy", "buys", "buy", "bought"),
    ("catch", "catches", "catch", "caught"),
    ("choose", "chooses", "choose", "chose"),
    ("cut", "cuts", "cut", "cut"),
    ("draw", "draws", "draw", "drew"),
    ("drink", "drinks", "drink", "drank"),
    ("drive", "drives", "drive", "drove"),
    ("eat", "eats", "eat", "ate"),
    ("fall", "falls", "fall", "fell"),
    ("feed", "feeds", "feed", "fed"),
    ("feel", "feels", "feel", "felt"),
    ("fight", "fights", "fight", "fought"),
    ("find", "finds", "find", "found"),
    ("fit", "fits", "fit", "fit"),
    ("forget", "forgets", "forget", "forgot"),
    ("get", "gets", "get", "got"),
    ("give", "gives", "give", "gave"),
    ("grow", "grows", "grow", "grew"),
    ("hear", "hears", "hear", "heard"),
    ("hold", "holds", "hold", "held"),
    ("hurt", "hurts", "hurt", "hurt"),
    ("keep", "keeps", "keep", "kept"),
    ("know", "knows", "know", "knew"),
    ("lead", "leads", "lead", "led"),
    ("leave", "leaves", "leave", "left"),
    ("lie", "lies", "lie", "lay"),
    ("lose", "loses", "lose", "lost"),
    ("make", "makes", "make", "made"),
    ("mean", "means", "mean", "meant"),
    ("meet", "meets", "meet", "met"),
    ("pay", "pays", "pay", "paid"),
    ("put", "puts", "put", "put"),
    ("read", "reads", "read", "read"),
    ("rise", "rises", "rise", "rose"),
    ("run", "runs", "run", "ran"),
    ("say", "says", "say", "said"),
    ("see", "sees", "see", "saw"),
    ("send", "sends", "send", "sent"),
    ("set", "sets", "set", "set"),
    ("show", "shows", "show", "showed"),
    ("sit", "sits", "sit", "sat"),
    ("sleep", "sleeps", "sleep", "slept"),
    ("speak", "speaks", "speak", "spoke"),
    ("spend", "spends", "spend", "spent"),
    ("stand", "stands", "stand", "stood"),
    ("take", "takes", "take", "took"),
    ("teach", "teaches", "teach", "taught"),
    ("tell", "tells", "tell", "told"),
    ("think", "thinks", "think", "thought"),
    ("understand", "understands", "understand", "understood"),
    ("undergo", "undergoes", "undergo", "underwent"),
    ("wake", "wakes", "wake", "woke"),
    ("wear", "wears", "wear", "wore"),
    ("win", "wins", "win", "won"),
    ("write", "writes", "write", "wrote"),
]

# Regular verbs whose past doubles the final consonant.
DOUBLING = {
    "admit", "commit", "control", "occur", "omit", "permit", "plan", "prefer",
    "refer", "stop", "transfer", "trim",
}

REGULARS = [
    "achieve", "address", "adjust", "administer", "admit", "advise", "agree",
    "allow", "ambulate", "appear", "apply", "approve", "arrange", "arrive",
    "ask", "aspirate", "assess", "assign", "assist", "attempt", "attend",
    "auscultate", "avoid", "believe", "biopsy", "breathe", "call", "cancel",
    "care", "carry", "cause", "change", "check", "clear", "close", "commit",
    "compare", "complain", "complete", "confirm", "consent", "consider",
    "consult", "contact", "continue", "control", "convert", "cough", "count",
    "cover", "decide", "decline", "decrease", "delay", "deliver",
    "demonstrate", "denote", "deny", "depend", "describe", "detect",
    "deteriorate", "determine", "develop", "diagnose", "dictate", "die",
    "diminish", "discharge", "disclose", "discontinue", "discuss", "dispense",
    "display", "document", "drain", "dress", "drop", "elevate", "eliminate",
    "emerge", "encourage", "end", "endorse", "enjoy", "evaluate", "examine",
    "exhibit", "expect", "experience", "explain", "expire", "expose",
    "extend", "extubate", "fail", "feature", "fill", "finish", "fix",
    "follow", "fracture", "function", "happen", "heal", "help", "hope",
    "hospitalize", "identify", "immunize", "implant", "improve", "include",
    "increase", "indicate", "infuse", "inject", "injure", "inspect",
    "instruct", "intubate", "investigate", "involve", "irrigate", "lack",
    "last", "like", "limit", "list", "live", "look", "lower", "maintain",
    "manage", "measure", "medicate", "mention", "monitor", "move", "need",
    "note", "notice", "notify", "obtain", "occur", "offer", "omit", "open",
    "order", "palpate", "pass", "perform", "permit", "persist", "place",
    "plan", "point", "prefer", "prepare", "prescribe", "present", "presume",
    "prevent", "proceed", "produce", "progress", "protect", "provide",
    "question", "radiate", "raise", "reach", "receive", "recommend",
    "reconcile", "record", "recover", "reduce", "refer", "refill", "refuse",
    "reject", "relate", "release", "relieve", "remain", "remove", "repair",
    "repeat", "replace", "report", "request", "require", "resect", "resolve",
    "respond", "rest", "restart", "result", "resume", "return", "reveal",
    "review", "schedule", "scratch", "secure", "seem", "sign", "smoke",
    "soften", "sound", "spray", "stabilize", "start", "state", "stay",
    "stitch", "stop", "study", "suffer", "suggest", "supply", "support",
    "suspect", "suture", "swallow", "swell", "tolerate", "transfer",
    "transfuse", "treat", "trim", "try", "turn", "use", "verify", "visit",
    "vomit", "wait", "walk", "want", "watch", "wean", "wheeze", "work",
    "worsen",
]


def third_singular(base: str) -> str:
    if base.endswith(("s", "x", "z", "ch", "sh", "o")):
        return base + "es"
    if base.endswith("y") and base[-2] not in "aeiou":
        return base[:-1] + "ies"
    return base + "s"


def past_form(base: str) -> str:
    if base in DOUBLING:
        return base + base[-1] + "ed"
    if base.endswith("e"):
        return base + "d"
    if base.endswith("y") and base[-2] not in "aeiou":
        return base[:-1] + "ied"
    return base + "ed"


def verb_rows() -> list[str]:
    rows = [f"{b}\t{t}\t{p}\t{pa}\t1" for b, t, p, pa in IRREGULARS]
    irregular_bases = {b for b, *_ in IRREGULARS}
    for base in sorted(set(REGULARS) - irregular_bases):
        rows.append(f"{base}\t{third_singular(base)}\t{base}\t{past_form(base)}\t0")
    return rows


# ---------------------------------------------------------------------------
# Misspellings: a slice of the Wikipedia common-misspellings list plus
# clinical vocabulary.

MISSPELLINGS = [
    ("pacemaker", "pacemkaer"),
    ("abdominal", "abdomnial"),
    ("absence", "absense"),
    ("acceptable", "acceptible"),
    ("accidentally", "accidentaly"),
    ("accommodate", "accomodate"),
    ("achieve", "acheive"),
    ("acquire", "aquire"),
    ("address", "adress"),
    ("aggressive", "agressive"),
    ("allergic", "alergic"),
    ("ambulance", "ambulence"),
    ("analysis", "analisys"),
    ("aneurysm", "aneurism"),
    ("antibiotic", "antibotic"),
    ("apparent", "apparant"),
    ("appearance", "appearence"),
    ("arthritis", "arthritus"),
    ("assessment", "assesment"),
    ("asthma", "athsma"),
    ("basically", "basicly"),
    ("beginning", "begining"),
    ("believe", "beleive"),
    ("benefit", "benifit"),
    ("breathing", "breathng"),
    ("calendar", "calender"),
    ("catheter", "cathetar"),
    ("cemetery", "cemetary"),
    ("certain", "certian"),
    ("column", "colum"),
    ("coming", "comming"),
    ("committee", "commitee"),
    ("completely", "completly"),
    ("condition", "condtion"),
    ("conscious", "concious"),
    ("consistent", "consistant"),
    ("definitely", "definately"),
    ("diabetes", "diabetis"),
    ("diagnosis", "diagnois"),
    ("diarrhea", "diarrhoea"),
    ("difference", "diffrence"),
    ("discomfort", "discomfart"),
    ("disease", "desease"),
    ("dizziness", "dizzyness"),
    ("embarrass", "embarass"),
    ("environment", "enviroment"),
    ("equipment", "equiptment"),
    ("exercise", "excercise"),
    ("existence", "existance"),
    ("experience", "experiance"),
    ("familiar", "familliar"),
    ("february", "febuary"),
    ("finally", "finaly"),
    ("foreign", "foriegn"),
    ("forty", "fourty"),
    ("fracture", "fractue"),
    ("government", "goverment"),
    ("grateful", "greatful"),
    ("guarantee", "garantee"),
    ("happened", "happend"),
    ("hemorrhage", "hemorrage"),
    ("history", "histroy"),
    ("hospital", "hopsital"),
    ("hygiene", "hygene"),
    ("immediately", "immediatly"),
    ("independent", "independant"),
    ("infection", "infectoin"),
    ("insulin", "insuline"),
    ("interesting", "intresting"),
    ("intravenous", "intravenus"),
    ("judgment", "judgement"),
    ("knowledge", "knowlege"),
    ("laboratory", "labratory"),
    ("license", "licence"),
    ("maintenance", "maintainance"),
    ("medicine", "medecine"),
    ("necessary", "neccessary"),
    ("neighbor", "nieghbor"),
    ("noticeable", "noticable"),
    ("occasion", "occassion"),
    ("occurred", "occured"),
    ("occurrence", "occurence"),
    ("patient", "pateint"),
    ("perform", "preform"),
    ("persistent", "persistant"),
    ("personnel", "personel"),
    ("physician", "physcian"),
    ("pneumonia", "pnuemonia"),
    ("possession", "posession"),
    ("prescription", "perscription"),
    ("privilege", "privelege"),
    ("probably", "probaly"),
    ("procedure", "proceedure"),
    ("pronunciation", "pronounciation"),
    ("receive", "recieve"),
    ("recommend", "reccomend"),
    ("referred", "refered"),
    ("relevant", "relevent"),
    ("religious", "religous"),
    ("remember", "remeber"),
    ("respiratory", "respitory"),
    ("restaurant", "restaraunt"),
    ("rhythm", "rythm"),
    ("schedule", "schedual"),
    ("seizure", "siezure"),
    ("separate", "seperate"),
    ("severe", "severee"),
    ("similar", "similiar"),
    ("strength", "strenght"),
    ("successful", "succesful"),
    ("surgery", "surgey"),
    ("surprise", "suprise"),
    ("swelling", "sweling"),
    ("symptom", "symtom"),
    ("temperature", "temperture"),
    ("tomorrow", "tommorow"),
    ("treatment", "treatement"),
    ("until", "untill"),
    ("vacuum", "vaccum"),
    ("weakness", "weekness"),
    ("weight", "wieght"),
    ("weird", "wierd"),
]

# ---------------------------------------------------------------------------
# Medical abbreviations and acronyms (expansion phrase -> abbreviation).

ABBREVIATIONS = [
    ("shortness of breath", "SOB"),
    ("gastrointestinal", "GI"),
    ("chest pain", "CP"),
    ("blood pressure", "BP"),
    ("heart rate", "HR"),
    ("as needed", "PRN"),
    ("twice a day", "BID"),
    ("three times a day", "TID"),
    ("four times a day", "QID"),
    ("by mouth", "PO"),
    ("intravenous", "IV"),
    ("intramuscular", "IM"),
    ("subcutaneous", "SQ"),
    ("history", "hx"),
    ("diagnosis", "dx"),
    ("treatment", "tx"),
    ("prescription", "rx"),
    ("symptoms", "sx"),
    ("fracture", "fx"),
    ("patient", "pt"),
    ("emergency department", "ED"),
    ("emergency room", "ER"),
    ("intensive care unit", "ICU"),
    ("operating room", "OR"),
    ("coronary artery disease", "CAD"),
    ("congestive heart failure", "CHF"),
    ("chronic obstructive pulmonary disease", "COPD"),
    ("myocardial infarction", "MI"),
    ("cerebrovascular accident", "CVA"),
    ("deep vein thrombosis", "DVT"),
    ("pulmonary embolism", "PE"),
    ("urinary tract infection", "UTI"),
    ("upper respiratory infection", "URI"),
    ("diabetes mellitus", "DM"),
    ("hypertension", "HTN"),
    ("atrial fibrillation", "AF"),
    ("electrocardiogram", "EKG"),
    ("electroencephalogram", "EEG"),
    ("magnetic resonance imaging", "MRI"),
    ("computed tomography", "CT"),
    ("complete blood count", "CBC"),
    ("basic metabolic panel", "BMP"),
    ("arterial blood gas", "ABG"),
    ("white blood cell", "WBC"),
    ("red blood cell", "RBC"),
    ("systolic blood pressure", "SBP"),
    ("range of motion", "ROM"),
    ("activities of daily living", "ADL"),
    ("do not resuscitate", "DNR"),
    ("nothing by mouth", "NPO"),
    ("normal saline", "NS"),
    ("nasogastric", "NG"),
    ("left lower quadrant", "LLQ"),
    ("right upper quadrant", "RUQ"),
    ("within normal limits", "WNL"),
    ("year old", "yo"),
    ("follow up", "f/u"),
    ("rule out", "r/o"),
    ("alert and oriented", "A&O"),
    ("no known drug allergies", "NKDA"),
    ("loss of consciousness", "LOC"),
    ("estimated blood loss", "EBL"),
    ("temperature", "temp"),
]

# ---------------------------------------------------------------------------
# Synonyms from frequent medical/clinical vocabulary.

SYNONYMS = [
    ("procedure", "therapy"),
    ("therapy", "procedure"),
    ("physician", "doctor"),
    ("doctor", "physician"),
    ("illness", "disease"),
    ("disease", "illness"),
    ("medication", "drug"),
    ("drug", "medication"),
    ("pain", "ache"),
    ("ache", "pain"),
    ("exam", "examination"),
    ("examination", "exam"),
    ("injury", "trauma"),
    ("trauma", "injury"),
    ("surgery", "operation"),
    ("operation", "surgery"),
    ("symptom", "sign"),
    ("sign", "symptom"),
    ("severe", "serious"),
    ("serious", "severe"),
    ("acute", "sudden"),
    ("sudden", "acute"),
    ("chronic", "persistent"),
    ("persistent", "chronic"),
    ("swelling", "edema"),
    ("edema", "swelling"),
    ("bruise", "contusion"),
    ("contusion", "bruise"),
    ("fever", "pyrexia"),
    ("pyrexia", "fever"),
    ("tiredness", "fatigue"),
    ("fatigue", "tiredness"),
    ("dizziness", "vertigo"),
    ("vertigo", "dizziness"),
    ("stomach", "abdomen"),
    ("abdomen", "stomach"),
    ("heart", "cardiac"),
    ("kidney", "renal"),
    ("liver", "hepatic"),
    ("lung", "pulmonary"),
    ("discomfort", "distress"),
    ("distress", "discomfort"),
    ("improve", "recover"),
    ("recover", "improve"),
    ("assess", "evaluate"),
    ("evaluate", "assess"),
    ("start", "begin"),
    ("begin", "start"),
    ("stop", "discontinue"),
    ("discontinue", "stop"),
]


def write(path: Path, header: str, rows: list[str]) -> None:
    path.write_text("# " + header + "\n" + "\n".join(rows) + "\n", encoding="utf-8")
    print(f"wrote {path} ({len(rows)} rows)")


def main() -> None:
    DATA.mkdir(parents=True, exist_ok=True)
    write(DATA / "keyboard.tsv", "letter<TAB>space-separated QWERTY neighbors", keyboard_rows())
    write(DATA / "verbs.tsv", "base<TAB>3sg<TAB>plural<TAB>past<TAB>irregular(0|1)", verb_rows())
    write(
        DATA / "misspellings.tsv",
        "correct<TAB>misspelled variant",
        [f"{a}\t{b}" for a, b in MISSPELLINGS],
    )
    write(
        DATA / "abbreviations.tsv",
        "expansion phrase<TAB>abbreviation",
        [f"{a}\t{b}" for a, b in ABBREVIATIONS],
    )
    write(
        DATA / "synonyms.tsv",
        "word<TAB>synonym",
        [f"{a}\t{b}" for a, b in SYNONYMS],
    )


if __name__ == "__main__":
    main()
