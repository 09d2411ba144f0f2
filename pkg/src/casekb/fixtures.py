"""Synthetic desk-scale corpus with hand-written PENMAN graphs and gold annotations.

Each template is a short report whose PENMAN graphs were written against the
redacted narrative, so downstream stages never depend on a text-to-AMR
parser. Seeds only change surface details (names, addresses, dates, plates),
never the graph structure, which keeps the gold files stable.
"""

from __future__ import annotations

import csv
import json
import random
from pathlib import Path

OFFENSES = ("Burglary", "Larceny", "Motor Vehicle Theft", "Robbery", "Stolen Property")
STATUTES = {
    "Burglary": "PL 140.25",
    "Larceny": "PL 155.25",
    "Motor Vehicle Theft": "PL 155.30",
    "Robbery": "PL 160.10",
    "Stolen Property": "PL 165.40",
}

FIRST = ["Dana", "Morgan", "Avery", "Jordan", "Casey", "Riley", "Quinn", "Harper", "Emerson", "Rowan",
         "Sasha", "Blake", "Reese", "Hayden", "Skyler", "Parker"]
LAST = ["Whitfield", "Okafor", "Lindqvist", "Moreau", "Castellano", "Brennan", "Nakamura", "Adeyemi",
        "Kowalski", "Delacroix", "Fairbanks", "Halvorsen", "Esposito", "Trujillo", "Vasquez", "Pemberton"]
STREETS = ["Maple Street", "Lake Avenue", "Culver Road", "Monroe Avenue", "Park Avenue", "Dewey Avenue",
           "Portland Avenue", "Clinton Avenue"]
ORGS = ["Wegmans", "Walmart", "Tops Market", "Rite Aid", "Dollar General", "Home Depot"]
MONTHS = ("01", "02", "03", "04", "05", "06", "07", "08", "09", "10", "11", "12")


# Confidence terms for selected gold events, written out by hand:
# (bucket base, path bonus, anchor bonus, object bonus, negation, hedge, ambiguity, cap?, prior, specificity)
DECOMPOSITIONS = {
    "kick-01/door": (0.55, 0.25, 0.25, 0.15, 0.0, 0.0, 0.02, True, 0.85, 0.03),
    "enter-01/home": (0.55, 0.25, 0.25, 0.15, 0.0, 0.0, 0.032, True, 0.88, 0.01),
    "take-01/property": (0.55, 0.25, 0.25, 0.15, 0.0, 0.0, 0.036 + 0.01, True, 0.78, 0.01),
    "steal-01/property": (0.55, 0.25, 0.25, 0.15, 0.0, 0.0, 0.008, True, 0.78, 0.01),
    "steal-01/no-item": (0.55, 0.25, 0.25, 0.0, 0.0, 0.0, 0.008, False, 0.70, 0.0),
    "discover-01": (0.30, 0.25, 0.0, 0.0, 0.0, 0.0, 0.028, False, None, 0.0),
    "turn-over-12": (0.50, 0.10, 0.25, 0.0, 0.0, 0.0, 0.04 + 0.02, False, 0.75, 0.0),
}


def decomposed_confidence(terms: tuple) -> float:
    """Evaluate a hand-declared term list (see ``DECOMPOSITIONS``)."""
    base, path, anchor, obj, neg, hedge, amb, capped, prior, bonus = terms
    raw = base + path + anchor + obj - neg - hedge - amb
    if capped:
        raw = min(raw, 0.98)
    raw = max(0.0, min(1.0, raw))
    if prior is not None:
        raw = 0.7 * prior + 0.3 * raw
    return round(max(0.0, min(1.0, raw + bonus)), 3)


# -- case templates ----------------------------------------------------------------
#
# ``text`` is formatted with the per-case surface values. ``persons`` lists the
# metadata person entries as (slot, role). Gold events name only the events the
# template is about; ``edges`` is the complete expected precedence edge set.

TEMPLATES: list[dict] = [
    {
        "name": "forced_entry_walkthrough",
        "offense": "Burglary",
        "text": ("On {DATE} {V} (V) called 911 to report a burglary at {ADDR}. "
                 "The suspect broke the window before entering the home. "
                 "The suspect kicked the door and stole a laptop worth $900. "
                 "Later V returned home and discovered the damage."),
        "persons": [("V", "victim")],
        "addresses": ["ADDR"],
        "amr": [
            """(c / call-02
    :ARG0 (p / person
        :name (n / name :op1 "[PERSON_1]"))
    :purpose (r / report-01
        :ARG0 p
        :ARG1 (b / burglary
            :location (a / address
                :name (n2 / name :op1 "[ADDRESS_1]")))))""",
            """(b / break-01
    :ARG0 (s / suspect)
    :ARG1 (w / window)
    :time (b2 / before
        :op1 (e / enter-01
            :ARG0 s
            :ARG1 (h / home))))""",
            """(a / and
    :op1 (k / kick-01
        :ARG0 (s / suspect)
        :ARG1 (d / door))
    :op2 (s2 / steal-01
        :ARG0 s
        :ARG1 (l / laptop
            :mod (m / monetary-quantity
                :quant 900
                :unit (d2 / dollar)))))""",
            """(a / and
    :op1 (r / return-01
        :ARG1 (p / person
            :name (n / name :op1 "V"))
        :ARG4 (h / home))
    :op2 (d / discover-01
        :ARG0 p
        :ARG1 (d2 / damage))
    :time (l / later))""",
        ],
        "gold": {
            "events": {
                "e0_c": "CallEvent", "e0_r": "ReportTakenEvent", "e1_b": "ForcedEntryEvent",
                "e1_e": "EntryEvent", "e2_k": "ForcedEntryEvent", "e2_s2": "TheftEvent",
                "e3_r": "ReturnEvent", "e3_d": "DiscoveryEvent",
            },
            "confidence": {"e2_k": "kick-01/door", "e1_e": "enter-01/home",
                           "e2_s2": "steal-01/property", "e3_d": "discover-01"},
            "violations": [],
            "different_from": 0,
            "pseudonyms": {"PERSON_1": "Victim_1", "V": "Victim_1"},
            "redactions": [("DATE", "DATE_1", "DATE"), ("PERSON", "PERSON_1", "V"),
                           ("ADDRESS", "ADDRESS_1", "ADDR")],
            "edges": [
                ("e0_c", "e0_r", "axiom"),
                ("e1_b", "e1_e", "cue"),
                ("e1_b", "e2_s2", "axiom"),
                ("e2_k", "e2_s2", "axiom"),
                ("e2_k", "e3_d", "cue"),
                ("e3_r", "e3_d", "axiom"),
            ],
            "frames": {"f_e1_b": {"entry_point": "window", "entry_method": "break"},
                       "f_e2_s2": {"stolen_items": ["laptop"], "value_mentions": ["900 dollar"]}},
        },
    },
    {
        "name": "vehicle_window_wallet",
        "offense": "Larceny",
        "text": ("{V} (V) parked a sedan with plate {PLATE} on {ADDR}. "
                 "The suspect broke the rear passenger window of the vehicle and stole a wallet. "
                 "V called police from {PHONE}. "
                 "Officer {O} took the report."),
        "persons": [("V", "victim"), ("O", "officer")],
        "addresses": ["ADDR"],
        "plates": ["PLATE"],
        "phones": ["PHONE"],
        "amr": [
            """(p / park-01
    :ARG0 (v / person
        :name (n / name :op1 "[PERSON_1]"))
    :ARG1 (s / sedan
        :mod (p2 / plate
            :name (n2 / name :op1 "[PLATE_1]")))
    :location (a / address
        :name (n3 / name :op1 "[ADDRESS_1]")))""",
            """(a / and
    :op1 (b / break-01
        :ARG0 (s / suspect)
        :ARG1 (w / window
            :mod (r / rear)
            :mod (p / passenger)
            :part-of (v / vehicle)))
    :op2 (s2 / steal-01
        :ARG0 s
        :ARG1 (w2 / wallet)))""",
            """(c / call-02
    :ARG0 (p / person
        :name (n / name :op1 "V"))
    :ARG1 (p2 / police)
    :source (t / telephone
        :name (n2 / name :op1 "[PHONE_1]")))""",
            """(r / report-01
    :ARG0 (p / person
        :name (n / name :op1 "[PERSON_2]")))""",
        ],
        "gold": {
            "events": {"e0_p": "NarrativeAction", "e1_b": "ForcedEntryEvent", "e1_s2": "TheftEvent",
                       "e2_c": "CallEvent", "e3_r": "ReportTakenEvent"},
            "confidence": {"e1_s2": "steal-01/property"},
            "violations": [],
            "different_from": 0,
            "pseudonyms": {"PERSON_1": "Victim_1", "PERSON_2": "Officer", "V": "Victim_1"},
            "redactions": [("PERSON", "PERSON_1", "V"), ("PLATE", "PLATE_1", "PLATE"),
                           ("ADDRESS", "ADDRESS_1", "ADDR"), ("PHONE", "PHONE_1", "PHONE"),
                           ("PERSON", "PERSON_2", "O")],
            "edges": [("e1_b", "e1_s2", "axiom"), ("e2_c", "e3_r", "axiom")],
            "frames": {"f_e1_b": {"entry_point": "window", "entry_structure": "vehicle"},
                       "f_e1_s2": {"stolen_items": ["wallet"], "value_mentions": []}},
        },
    },
    {
        "name": "vehicle_recovered_arrest",
        "offense": "Motor Vehicle Theft",
        "text": ("{V} (V) reported that a truck was stolen from {ADDR}. "
                 "The keys were possibly left in the truck. "
                 "Officer {O} arrested {S} (S) in Irondequoit. "
                 "Then S was booked at the station. "
                 "The truck was turned over to V."),
        "persons": [("V", "victim"), ("O", "officer"), ("S", "suspect")],
        "addresses": ["ADDR"],
        "amr": [
            """(r / report-01
    :ARG0 (p / person
        :name (n / name :op1 "[PERSON_1]"))
    :ARG1 (s / steal-01
        :ARG1 (t / truck)
        :source (a / address
            :name (n2 / name :op1 "[ADDRESS_1]"))))""",
            """(p / possible-01
    :ARG1 (l / leave-15
        :ARG1 (k / key)
        :ARG2 (t / truck)))""",
            """(a / arrest-01
    :ARG0 (p / person
        :name (n / name :op1 "[PERSON_2]"))
    :ARG1 (p2 / person
        :name (n2 / name :op1 "[PERSON_3]"))
    :location (c / city
        :name (n3 / name :op1 "[GPE_1]")))""",
            """(b / book-01
    :ARG1 (p / person
        :name (n / name :op1 "S"))
    :location (s / station)
    :time (t / then))""",
            """(t / turn-over-12
    :ARG1 (t2 / truck)
    :ARG2 (p / person
        :name (n / name :op1 "V")))""",
        ],
        "gold": {
            "events": {"e0_r": "ReportTakenEvent", "e0_s": "TheftEvent", "e1_l": "LeaveObjectEvent",
                       "e2_a": "ArrestEvent", "e3_b": "BookingEvent", "e4_t": "TransferCustodyEvent"},
            "confidence": {"e4_t": "turn-over-12"},
            "hedged": ["e1_l"],
            "violations": [],
            "different_from": 0,
            "pseudonyms": {"PERSON_1": "Victim_1", "PERSON_2": "Officer", "PERSON_3": "Suspect_1",
                           "S": "Suspect_1", "V": "Victim_1"},
            "redactions": [("PERSON", "PERSON_1", "V"), ("ADDRESS", "ADDRESS_1", "ADDR"),
                           ("PERSON", "PERSON_2", "O"), ("PERSON", "PERSON_3", "S"),
                           ("GPE", "GPE_1", "=Irondequoit")],
            "edges": [("e2_a", "e3_b", "cue+axiom")],
            "frames": {"f_e0_s": {"stolen_items": ["truck"], "value_mentions": []}},
        },
    },
    {
        "name": "street_robbery_two_unknown",
        "offense": "Robbery",
        "text": ("S1 and S2 approached {V} (V) outside {ORG}. "
                 "S1 pointed a handgun at V and demanded money. "
                 "S2 grabbed a necklace from V. "
                 "Both suspects fled on foot."),
        "persons": [("V", "victim")],
        "amr": [
            """(a / approach-01
    :ARG0 (a2 / and
        :op1 (p / person
            :name (n / name :op1 "S1"))
        :op2 (p2 / person
            :name (n2 / name :op1 "S2")))
    :ARG1 (p3 / person
        :name (n3 / name :op1 "[PERSON_1]"))
    :location (o / outside
        :op1 (c / company
            :name (n4 / name :op1 "[ORG_1]"))))""",
            """(a / and
    :op1 (p / point-01
        :ARG0 (p2 / person
            :name (n / name :op1 "S1"))
        :ARG1 (h / handgun)
        :ARG2 (p3 / person
            :name (n2 / name :op1 "V")))
    :op2 (d / demand-01
        :ARG0 p2
        :ARG1 (m / money)
        :ARG2 p3))""",
            """(g / grab-01
    :ARG0 (p / person
        :name (n / name :op1 "S2"))
    :ARG1 (n2 / necklace)
    :ARG2 (p2 / person
        :name (n3 / name :op1 "V")))""",
            """(f / flee-05
    :ARG0 (a / and
        :op1 (p / person
            :name (n / name :op1 "S1"))
        :op2 (p2 / person
            :name (n2 / name :op1 "S2")))
    :manner (f2 / foot))""",
        ],
        "gold": {
            "events": {"e0_a": "NarrativeAction", "e1_p": "NarrativeAction", "e1_d": "NarrativeAction",
                       "e2_g": "TheftEvent", "e3_f": "NarrativeAction"},
            "violations": [],
            "different_from": 1,
            "victims": {"e2_g": ["Victim_1"]},
            "pseudonyms": {"PERSON_1": "Victim_1", "S1": "Suspect_Unknown_1", "S2": "Suspect_Unknown_2",
                           "V": "Victim_1"},
            "redactions": [("PERSON", "PERSON_1", "V"), ("ORG", "ORG_1", "ORG")],
            "edges": [],
            "frames": {"f_e2_g": {"stolen_items": ["necklace"], "value_mentions": []}},
        },
    },
    {
        "name": "pawned_goods_no_item",
        "offense": "Stolen Property",
        "text": ("Officer {O} observed {S} (S) selling a television at {ORG}. "
                 "S admitted to stealing. "
                 "S was arrested and transported to the station."),
        "persons": [("O", "officer"), ("S", "suspect")],
        "amr": [
            """(o / observe-01
    :ARG0 (p / person
        :name (n / name :op1 "[PERSON_1]"))
    :ARG1 (s / sell-01
        :ARG0 (p2 / person
            :name (n2 / name :op1 "[PERSON_2]"))
        :ARG1 (t / television)
        :location (c / company
            :name (n3 / name :op1 "[ORG_1]"))))""",
            """(a / admit-01
    :ARG0 (p / person
        :name (n / name :op1 "S"))
    :ARG1 (s / steal-01
        :ARG0 p))""",
            """(a / and
    :op1 (a2 / arrest-01
        :ARG1 (p / person
            :name (n / name :op1 "S")))
    :op2 (t / transport-01
        :ARG1 p
        :ARG2 (s / station)))""",
        ],
        "gold": {
            "events": {"e0_o": "NarrativeAction", "e0_s": "NarrativeAction", "e1_a": "NarrativeAction",
                       "e1_s": "TheftEvent", "e2_a2": "ArrestEvent", "e2_t": "PoliceAction"},
            "confidence": {"e1_s": "steal-01/no-item"},
            "violations": ["theft_has_stolen_item"],
            "demoted": ["e1_s"],
            "different_from": 0,
            "pseudonyms": {"PERSON_1": "Officer", "PERSON_2": "Suspect_1", "S": "Suspect_1"},
            "redactions": [("PERSON", "PERSON_1", "O"), ("PERSON", "PERSON_2", "S"), ("ORG", "ORG_1", "ORG")],
            "edges": [],
            "frames": {"f_e1_s": {"stolen_items": [], "value_mentions": []}},
        },
    },
    {
        "name": "entry_then_discovery",
        "offense": "Burglary",
        "text": ("Suspect (S) entered the home. "
                 "Then Victim (V) discovered the damage. "
                 "Nothing was taken from the home."),
        "persons": [],
        "amr": [
            """(e / enter-01
    :ARG0 (s / suspect)
    :ARG1 (h / home))""",
            """(d / discover-01
    :ARG0 (v / victim)
    :ARG1 (d2 / damage)
    :time (t / then))""",
            """(t / take-01
    :polarity -
    :ARG1 (n / nothing)
    :source (h / home))""",
        ],
        "gold": {
            "events": {"e0_e": "EntryEvent", "e1_d": "DiscoveryEvent", "e2_t": "NarrativeAction"},
            "confidence": {"e0_e": "enter-01/home", "e1_d": "discover-01"},
            "negated": ["e2_t"],
            "violations": [],
            "different_from": 0,
            "pseudonyms": {"S": "Suspect_Unknown", "V": "Victim_1"},
            "redactions": [],
            "edges": [("e0_e", "e1_d", "cue")],
            "frames": {"f_e0_e": {"entry_point": None, "entry_method": "enter"}},
        },
    },
    {
        "name": "shoplift_witness",
        "offense": "Larceny",
        "text": ("{W} (W), an employee of {ORG}, observed a male shoplift two watches. "
                 "W called 911 from {PHONE}. "
                 "The male fled in a van."),
        "persons": [("W", "witness")],
        "phones": ["PHONE"],
        "amr": [
            """(o / observe-01
    :ARG0 (p / person
        :name (n / name :op1 "[PERSON_1]"))
    :ARG1 (s / shoplift-01
        :ARG0 (m / male)
        :ARG1 (w / watch
            :quant 2)))""",
            """(c / call-02
    :ARG0 (p / person
        :name (n / name :op1 "W"))
    :source (t / telephone
        :name (n2 / name :op1 "[PHONE_1]")))""",
            """(f / flee-05
    :ARG0 (m / male)
    :instrument (v / van))""",
        ],
        "gold": {
            "events": {"e0_o": "NarrativeAction", "e0_s": "TheftEvent", "e1_c": "CallEvent",
                       "e2_f": "NarrativeAction"},
            "violations": [],
            "different_from": 0,
            "pseudonyms": {"PERSON_1": "Witness_1", "W": "Witness_1"},
            "redactions": [("PERSON", "PERSON_1", "W"), ("ORG", "ORG_1", "ORG"), ("PHONE", "PHONE_1", "PHONE")],
            "edges": [],
            "frames": {"f_e0_s": {"stolen_items": ["watch"], "value_mentions": []}},
        },
    },
    {
        "name": "three_unknown_pry",
        "offense": "Burglary",
        "text": ("S1, S2 and S3 pried open the rear door of {ORG} with a crowbar. "
                 "S1 took cash from the register. "
                 "Afterwards the suspects fled in a car."),
        "persons": [],
        "amr": [
            """(p / pry-01
    :ARG0 (a / and
        :op1 (p1 / person
            :name (n1 / name :op1 "S1"))
        :op2 (p2 / person
            :name (n2 / name :op1 "S2"))
        :op3 (p3 / person
            :name (n3 / name :op1 "S3")))
    :ARG1 (d / door
        :mod (r / rear)
        :part-of (c / company
            :name (n4 / name :op1 "[ORG_1]")))
    :instrument (c2 / crowbar))""",
            """(t / take-01
    :ARG0 (p / person
        :name (n / name :op1 "S1"))
    :ARG1 (c / cash)
    :source (r / register))""",
            """(f / flee-05
    :ARG0 (s / suspect)
    :instrument (c / car))""",
        ],
        "gold": {
            "events": {"e0_p": "ForcedEntryEvent", "e1_t": "TheftEvent", "e2_f": "NarrativeAction"},
            "confidence": {"e1_t": "take-01/property"},
            "violations": [],
            "different_from": 3,
            "pseudonyms": {"S1": "Suspect_Unknown_1", "S2": "Suspect_Unknown_2", "S3": "Suspect_Unknown_3"},
            "redactions": [("ORG", "ORG_1", "ORG")],
            "edges": [("e0_p", "e1_t", "axiom"), ("e1_t", "e2_f", "cue")],
            "frames": {"f_e0_p": {"entry_point": "door", "entry_method": "pry", "entry_structure": "company",
                                  "entry_tool": "crowbar"},
                       "f_e1_t": {"stolen_items": ["cash"], "value_mentions": []}},
        },
    },
    {
        "name": "cue_overrides_axiom",
        "offense": "Larceny",
        "text": ("S stole a bicycle from the yard of {ADDR}. "
                 "Then S smashed the window of the garage."),
        "persons": [],
        "addresses": ["ADDR"],
        "amr": [
            """(s / steal-01
    :ARG0 (p / person
        :name (n / name :op1 "S"))
    :ARG1 (b / bicycle)
    :source (y / yard
        :poss (a / address
            :name (n2 / name :op1 "[ADDRESS_1]"))))""",
            """(s2 / smash-01
    :ARG0 (p / person
        :name (n / name :op1 "S"))
    :ARG1 (w / window
        :part-of (g / garage))
    :time (t / then))""",
        ],
        "gold": {
            "events": {"e0_s": "TheftEvent", "e1_s2": "ForcedEntryEvent"},
            "violations": [],
            "different_from": 0,
            "pseudonyms": {"S": "Suspect_Unknown"},
            "redactions": [("ADDRESS", "ADDRESS_1", "ADDR")],
            "edges": [("e0_s", "e1_s2", "cue")],
            "conflicts": [("e1_s2", "e0_s", "forced_entry_before_theft")],
            "frames": {"f_e1_s2": {"entry_point": "window", "entry_structure": "garage"},
                       "f_e0_s": {"stolen_items": ["bicycle"], "value_mentions": []}},
        },
    },
    {
        "name": "attempted_vehicle_theft",
        "offense": "Motor Vehicle Theft",
        "text": ("{V} (V) stated that a person likely tried to take the car from {ADDR}. "
                 "The steering column was damaged. "
                 "I responded and canvassed the area."),
        "persons": [("V", "victim")],
        "addresses": ["ADDR"],
        "amr": [
            """(s / state-01
    :ARG0 (p / person
        :name (n / name :op1 "[PERSON_1]"))
    :ARG1 (l / likely-01
        :ARG1 (t / try-01
            :ARG0 (p2 / person)
            :ARG1 (t2 / take-01
                :ARG0 p2
                :ARG1 (c / car)
                :source (a / address
                    :name (n2 / name :op1 "[ADDRESS_1]"))))))""",
            """(d / damage-01
    :ARG1 (c / steering-column))""",
            """(a / and
    :op1 (r / respond-01
        :ARG0 (i / i))
    :op2 (c / canvass-01
        :ARG0 i
        :ARG1 (a2 / area)))""",
        ],
        "gold": {
            "events": {"e0_s": "NarrativeAction", "e0_l": "NarrativeAction", "e0_t": "NarrativeAction",
                       "e0_t2": "TheftEvent", "e1_d": "PropertyDamageEvent", "e2_r": "PoliceAction",
                       "e2_c": "PoliceAction"},
            "violations": [],
            "different_from": 0,
            "pseudonyms": {"PERSON_1": "Victim_1", "V": "Victim_1", "I": "Officer"},
            "redactions": [("PERSON", "PERSON_1", "V"), ("ADDRESS", "ADDRESS_1", "ADDR")],
            "edges": [],
            "frames": {"f_e0_t2": {"stolen_items": ["car"], "value_mentions": []}},
        },
    },
]


# -- standalone predicate fixtures -------------------------------------------------

# PENMAN, expected confidence, and which part of the value the published
# walkthrough pins down versus what the shipped calibration supplies.
PREDICATE_FIXTURES = [
    {"predicate": "kick-01", "event_class": "ForcedEntryEvent", "expected": 0.919,
     "penman": "(k / kick-01 :ARG0 (s / suspect) :ARG1 (d / door))", "source": "published",
     "note": "every constant is stated in the worked example"},
    {"predicate": "enter-01", "event_class": "EntryEvent", "expected": 0.920,
     "penman": "(e / enter-01 :ARG0 (s / suspect) :ARG1 (h / home))", "source": "calibration",
     "note": "entry prior 0.88 and specificity 0.01 chosen to land on the published value"},
    {"predicate": "leave-15", "event_class": "LeaveObjectEvent", "expected": 0.488,
     "penman": "(l / leave-15 :ARG0 (s / suspect) :ARG1 (n / note))", "source": "calibration",
     "note": "ambiguity coefficients fitted to this row"},
    {"predicate": "take-01", "event_class": "TheftEvent", "expected": 0.850,
     "penman": "(t / take-01 :ARG0 (s / suspect) :ARG1 (w / wallet))", "source": "calibration",
     "note": "theft prior 0.78 and specificity 0.01"},
    {"predicate": "turn-over-12", "event_class": "TransferCustodyEvent", "expected": 0.762,
     "penman": "(t / turn-over-12 :ARG0 (o / officer) :ARG1 (w / wallet))", "source": "calibration",
     "note": "police prior 0.75 with the lemma fallback path and ambiguity fit"},
    {"predicate": "discover-01", "event_class": "DiscoveryEvent", "expected": 0.522,
     "penman": "(d / discover-01 :ARG0 (v / victim) :ARG1 (d2 / damage))", "source": "calibration",
     "note": "ambiguity coefficients fitted to this row"},
]


# -- generation ------------------------------------------------------------------


def _surface(rng: random.Random, template: dict) -> dict[str, str]:
    firsts = rng.sample(FIRST, 4)
    lasts = rng.sample(LAST, 4)
    people = [f"{f} {l}" for f, l in zip(firsts, lasts)]
    letters = "".join(rng.choice("ABCDEFGHJKLMNPRSTUVWXYZ") for _ in range(3))
    return {
        "V": people[0], "O": lasts[1], "S": people[2], "W": people[3],
        "ADDR": f"{rng.randint(10, 999)} {rng.choice(STREETS)}",
        "ORG": rng.choice(ORGS),
        "PLATE": f"{letters}-{rng.randint(1000, 9999)}",
        "PHONE": f"585-{rng.randint(200, 999)}-{rng.randint(1000, 9999)}",
        "DATE": f"{rng.choice(MONTHS)}/{rng.randint(10, 28)}/2023",
    }


def build_case(seed: int, index: int) -> dict:
    """One case bundle plus gold, as plain data."""
    template = TEMPLATES[index % len(TEMPLATES)]
    rng = random.Random(f"{seed}:{index}")
    surf = _surface(rng, template)
    case_id = f"RPD-{index + 1:04d}"
    text = template["text"].format(**surf)
    persons = [{"name": f"Officer {surf[slot]}" if role == "officer" else surf[slot], "role": role}
               for slot, role in template["persons"]]
    # officers are found by the title pattern, which redacts only the surname
    persons = [dict(p, name=p["name"].split(" ", 1)[1]) if p["role"] == "officer" else p for p in persons]
    metadata = {
        "case_id": case_id,
        "case_number": f"{2023}-{seed % 1000:03d}{index + 1:05d}",
        "offense": template["offense"],
        "statute": STATUTES[template["offense"]],
        "report_date": f"2023-{rng.choice(MONTHS)}-{rng.randint(10, 28)}",
        "persons": persons,
    }
    for key in ("addresses", "plates", "phones"):
        if template.get(key):
            metadata[key] = [surf[s] for s in template[key]]
    gold = dict(template["gold"])
    gold["template"] = template["name"]
    gold["redactions"] = [
        {"category": cat, "placeholder": ph, "surface": slot[1:] if slot.startswith("=") else surf[slot]}
        for cat, ph, slot in gold["redactions"]
    ]
    gold["confidence"] = {eid: decomposed_confidence(DECOMPOSITIONS[key])
                          for eid, key in gold.get("confidence", {}).items()}
    gold["edges"] = [{"source": s, "target": t, "support": sup} for s, t, sup in gold["edges"]]
    gold["conflicts"] = [{"kept_source": t, "kept_target": s, "dropped_axiom": ax}
                         for s, t, ax in gold.get("conflicts", [])]
    gold["sentences"] = len(template["amr"])
    gold["case_id"] = case_id
    amr = "\n\n".join(f"# ::id {case_id}.{i}\n{g}" for i, g in enumerate(template["amr"])) + "\n"
    return {"case_id": case_id, "narrative": text + "\n", "metadata": metadata, "amr": amr, "gold": gold}


def generate_fixture_corpus(seed: int = 42, n_cases: int = 10, out_dir: str | Path | None = None) -> list[dict]:
    """Build ``n_cases`` cases; with ``out_dir`` also write them as case bundles.

    Layout: ``<out_dir>/<case_id>/<case_id>.{narrative.txt,metadata.json,amr.txt,gold.json}``.
    The first five cases cover the five offense categories.
    """
    if n_cases < 1:
        raise ValueError("n_cases must be at least 1")
    cases = [build_case(seed, i) for i in range(n_cases)]
    if out_dir is not None:
        root = Path(out_dir)
        for c in cases:
            d = root / c["case_id"]
            d.mkdir(parents=True, exist_ok=True)
            cid = c["case_id"]
            (d / f"{cid}.narrative.txt").write_text(c["narrative"], encoding="utf-8")
            (d / f"{cid}.metadata.json").write_text(_dump(c["metadata"]), encoding="utf-8")
            (d / f"{cid}.amr.txt").write_text(c["amr"], encoding="utf-8")
            (d / f"{cid}.gold.json").write_text(_dump(c["gold"]), encoding="utf-8")
    return cases


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


# -- review votes ------------------------------------------------------------------
#
# Five cases, six reviewers. Per question: the human votes per case and the
# system answer. Vote lists are written in reviewer order r1..r6.

_REVIEW = {
    "Q1": [
        (["911 call"] * 4 + ["Officer dispatched"] * 2, "911 call"),
        (["Walk-in / in-person report"] * 5 + ["Other"], "Walk-in / in-person report"),
        (["Officer observed it directly"] * 4 + ["911 call"] * 2, "Officer observed it directly"),
        (["911 call"] * 3 + ["Officer dispatched"] * 3, "911 call"),
        (["311 call"] * 3 + ["911 call"] * 3, "911 call"),
    ],
    "Q2": [
        (["Primary vehicle incident"] * 5 + ["Vehicle mentioned only"], "Primary vehicle incident"),
        (["Primary vehicle incident"] * 6, "Primary vehicle incident"),
        (["Vehicle mentioned only"] * 4 + ["No vehicle mentioned"] * 2, "Vehicle mentioned only"),
        (["No vehicle mentioned"] * 5 + ["Vehicle mentioned only"], "Primary vehicle incident"),
        (["No vehicle mentioned"] * 6, "No vehicle mentioned"),
    ],
    "Q3": [
        (["Yes"] * 5 + ["Not clear"], "Yes"),
        (["No"] * 4 + ["Not clear"] * 2, "Yes"),
        (["Yes"] * 4 + ["No"] * 2, "No"),
        (["No"] * 6, "No"),
        (["Yes"] * 4 + ["Not clear"] * 2, "Not clear"),
    ],
    "Q4": [
        (["Door"] * 3 + ["Window"] * 3, "Door"),
        (["Window"] * 3 + ["Glass"] * 3, "Window"),
        (["Door"] * 2 + ["Other"] * 2 + ["Window"] * 2, "Door"),
        (["Vehicle part"] * 3 + ["Window"] * 3, "Vehicle part"),
        (["Other"] * 3 + ["Door"] * 3, "Other"),
    ],
    "Q5": [
        (["Yes"] * 6, "Yes"),
        (["Yes"] * 5 + ["Not clear"], "Yes"),
        (["Yes"] * 4 + ["No"] * 2, "No"),
        (["Yes"] * 6, "Yes"),
        (["Yes"] * 5 + ["No"], "Yes"),
    ],
    "Q6": [
        (["laptop"] * 6, "laptop"),
        (["wallet"] * 5 + ["Not clear"], "wallet"),
        (["None named"] * 6, "None named"),
        (["truck"] * 4 + ["None named"] * 2, "truck"),
        (["necklace"] * 6, "necklace"),
    ],
    "Q7": [
        (["Specific time"] * 5 + ["Rough time only"], "Specific time"),
        (["Specific time"] * 4 + ["Rough time only"] * 2, "Specific time"),
        (["Rough time only"] * 6, "Rough time only"),
        (["No time mentioned"] * 5 + ["Not clear"], "No time mentioned"),
        (["Specific time"] * 6, "Specific time"),
    ],
    "Q8": [
        ({"Victim": 6, "Officer": 5, "Witness": 1}, ["Victim", "Officer"]),
        ({"Suspect": 4, "Victim": 2}, ["Suspect"]),
        ({"Victim": 3, "Officer": 5}, ["Officer", "Witness"]),
        ({"Suspect": 3, "Victim": 4, "Other": 1}, ["Suspect"]),
        ({"Officer": 3, "Person with Knowledge": 2}, ["Officer"]),
    ],
    "Q9": [
        (["Most of the questions"] * 4 + ["All of the questions"] * 2, "Most of the questions"),
        (["All of the questions"] * 5 + ["Most of the questions"], "All of the questions"),
        (["Some of the questions"] * 4 + ["Most of the questions"] * 2, "Most of the questions"),
        (["Most of the questions"] * 6, "Most of the questions"),
        (["All of the questions"] * 4 + ["Some of the questions"] * 2, "All of the questions"),
    ],
}
REVIEW_CASES = tuple(f"R{i}" for i in range(1, 6))
REVIEWERS = tuple(f"r{i}" for i in range(1, 7))


def review_rows() -> tuple[list[dict], list[dict]]:
    votes, system = [], []
    for q, per_case in _REVIEW.items():
        for case, (human, answer) in zip(REVIEW_CASES, per_case):
            if isinstance(human, dict):
                # option -> vote count; reviewer k selects the option when k < count
                for k, reviewer in enumerate(REVIEWERS):
                    for option in sorted(human):
                        if k < human[option]:
                            votes.append({"case_id": case, "question_id": q, "reviewer_id": reviewer,
                                          "option": option})
                system.append({"case_id": case, "question_id": q, "answer": ";".join(answer)})
            else:
                for reviewer, option in zip(REVIEWERS, human):
                    votes.append({"case_id": case, "question_id": q, "reviewer_id": reviewer, "option": option})
                system.append({"case_id": case, "question_id": q, "answer": answer})
    return votes, system


def write_review_fixture(out_dir: str | Path) -> tuple[Path, Path]:
    """Write ``review_votes.csv`` and ``system_answers.csv``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    votes, system = review_rows()
    vpath, spath = out / "review_votes.csv", out / "system_answers.csv"
    with open(vpath, "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, ["case_id", "question_id", "reviewer_id", "option"], lineterminator="\n")
        w.writeheader()
        w.writerows(votes)
    with open(spath, "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, ["case_id", "question_id", "answer"], lineterminator="\n")
        w.writeheader()
        w.writerows(system)
    return vpath, spath
