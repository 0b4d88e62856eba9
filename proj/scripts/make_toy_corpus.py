#!/usr/bin/env python3
# Copyright 2026 The DSR Toolkit Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Writes the toy corpus data/toy/corpus.jsonl and its hand annotations.

Every dialog has 16 turns and follows one scenario. The scenario alone
decides whether a turn is augmentable, so annotations.json lists the
expected turns without running the toolkit.
"""

import json
import pathlib
import random

ROOT = pathlib.Path(__file__).resolve().parent.parent
TURNS = 16

# service name in dialogs -> (db table, state slot prefix, name slot)
SERVICES = {
    "restaurant": ("restaurant", "restaurant-", "restaurant-name"),
    "hotel": ("hotel", "hotel-", "hotel-name"),
    "attraction": ("attraction", "attraction-", "attraction-name"),
    "Restaurants_1": ("restaurants_1", "", "restaurant_name"),
    "Hotels_1": ("hotels_1", "", "hotel_name"),
    "Travel_1": ("travel_1", "", "attraction_name"),
    "Events_1": ("events_1", "", "event_name"),
    "Movies_1": ("movies_1", "", "movie_name"),
    "taxi": (None, "taxi-", "taxi-name"),
}
NOUN = {
    "restaurant": "restaurant", "hotel": "hotel", "attraction": "attraction",
    "Restaurants_1": "restaurant", "Hotels_1": "hotel", "Travel_1": "attraction",
    "Events_1": "event", "Movies_1": "movie", "taxi": "taxi",
}

# (scenario, services, count). Accept dialogs hold one augmentable turn,
# except accept_twice which holds two.
PLAN = [
    ("accept", "hotel", 1),  # hotel_accept_2nd
    ("accept", "restaurant", 3),
    ("accept", "hotel", 2),
    ("accept", "attraction", 2),
    ("accept", "Restaurants_1", 2),
    ("accept", "Hotels_1", 2),
    ("accept", "Travel_1", 1),
    ("accept", "Events_1", 1),
    ("accept", "Movies_1", 1),
    ("accept_twice", "hotel+restaurant", 1),
    ("accept_plus_taxi", "restaurant+taxi", 1),
    ("reject", "restaurant", 2),
    ("reject", "hotel", 2),
    ("reject", "Events_1", 1),
    ("single", "restaurant", 2),
    ("single", "hotel", 2),
    ("single", "Restaurants_1", 1),
    ("final", "attraction", 2),
    ("final", "Hotels_1", 1),
    ("absent", "restaurant", 2),
    ("absent", "Travel_1", 1),
    ("taxi", "taxi", 3),
    ("preexisting", "hotel", 2),
    ("preexisting", "Restaurants_1", 1),
    ("plain", "restaurant", 4),
    ("plain", "hotel", 3),
    ("plain", "attraction+taxi", 2),
    ("plain", "Movies_1", 2),
]

PHANTOMS = ["marrowby grill", "quellfast kitchen", "tressido diner",
            "obliqua tavern", "vantrell bistro", "sombrey eatery"]
TAXIS = ["red sedan", "blue hatchback", "white minivan", "black estate",
         "grey coupe", "silver wagon"]


class Builder:
    def __init__(self, db, rng, dialog_id, services):
        self.db = db
        self.rng = rng
        self.id = dialog_id
        self.services = services
        self.state = {s: {} for s in services}
        self.turns = []

    def entities(self, service, n, avoid=()):
        table = SERVICES[service][0]
        records = self.db["tables"][table]
        field = self.db["name_fields"][table]
        pool = [r for r in records if r[field] not in avoid]
        picked = self.rng.sample(pool, n)
        return [entity(service, r, field) for r in picked]

    def user(self, text, updates=None):
        for service, slots in (updates or {}).items():
            self.state[service].update(slots)
        frames = []
        for service in self.services:
            frames.append({
                "service": service,
                "slot_values": {k: [v] for k, v in sorted(self.state[service].items())},
                "requested_slots": [],
            })
        self.turns.append({"speaker": "USER", "utterance": text, "frames": frames})

    def system(self, text, results=None):
        turn = {"speaker": "SYSTEM", "utterance": text, "frames": []}
        if results is not None:
            turn["search_results"] = results
        self.turns.append(turn)

    def slot(self, service, name):
        return SERVICES[service][1] + name

    def name_slot(self, service):
        return SERVICES[service][2]

    def chatter_until(self, length, service):
        """Pads with booking talk that never offers results."""
        people = str(self.rng.choice([2, 3, 4, 5]))
        user_lines = ["can you book it for " + people + " people please",
                      "what is the phone number", "is parking available nearby",
                      "great that is all i need"]
        system_lines = ["booking confirmed . anything else ?",
                        "the number is in your confirmation email .",
                        "yes there is parking close by .", "you are welcome . goodbye ."]
        u = v = 0
        while len(self.turns) < length:
            if len(self.turns) % 2 == 0:
                update = {service: {self.slot(service, "people"): people}} if u == 0 else None
                self.user(user_lines[u % len(user_lines)], update)
                u += 1
            else:
                self.system(system_lines[v % len(system_lines)])
                v += 1

    def dump(self):
        assert len(self.turns) == TURNS, (self.id, len(self.turns))
        return {"dialog_id": self.id, "services": self.services, "turns": self.turns}


def entity(service, record, field):
    attrs = {k: v for k, v in sorted(record.items()) if k != field}
    return {"domain": service, "name": record[field], "attributes": attrs}


def opening(b, service):
    noun = NOUN[service]
    area = b.rng.choice(["north", "south", "east", "west", "centre"])
    b.user("i am looking for a " + noun + " in the " + area,
           {service: {b.slot(service, "area"): area}})
    b.system("what price range would you like ?")
    price = b.rng.choice(["cheap", "moderate", "expensive"])
    b.user("something " + price + " please", {service: {b.slot(service, "pricerange"): price}})


def offer(b, service, n, accept_index):
    """System lists n results; user takes result accept_index (or none)."""
    results = b.entities(service, n)
    names = [r["name"] for r in results]
    b.system("i have " + " or ".join(names) + " . any preference ?", results)
    if accept_index is None:
        b.user("none of those sound right . do you have anything else")
        return None, results
    chosen = names[accept_index]
    b.user("yes please book " + chosen, {service: {b.name_slot(service): chosen}})
    return len(b.turns) - 2, results


def build(kind, services_spec, index, db, rng):
    services = services_spec.split("+")
    main = services[0]
    dialog_id = "toy-%02d-%s-%s" % (index, kind, main.lower())
    if kind == "accept" and main == "hotel" and index == 0:
        dialog_id = "hotel_accept_2nd"
    b = Builder(db, rng, dialog_id, services)
    expected = []
    multi = set()

    if kind in ("accept", "accept_twice", "accept_plus_taxi"):
        opening(b, main)
        pick = 1 if dialog_id == "hotel_accept_2nd" else rng.randrange(3)
        turn, _ = offer(b, main, 3, pick)
        expected.append(turn)
        multi.add(main)
        if kind == "accept_twice":
            second = services[1]
            b.system("booked . can i help with anything else ?")
            b.user("i also need a " + NOUN[second])
            turn, _ = offer(b, second, 4, rng.randrange(4))
            expected.append(turn)
            multi.add(second)
        if kind == "accept_plus_taxi":
            b.system("booked . can i help with anything else ?")
            b.user("i need a taxi to get there", {"taxi": {"taxi-leaveat": "evening"}})
            cars = [{"domain": "taxi", "name": c, "attributes": {}} for c in rng.sample(TAXIS, 2)]
            b.system("i can send a " + cars[0]["name"] + " or a " + cars[1]["name"] + " .", cars)
            b.user("the " + cars[0]["name"] + " is fine", {"taxi": {"taxi-name": cars[0]["name"]}})
            multi.add("taxi")
    elif kind == "reject":
        opening(b, main)
        offer(b, main, 3, None)
        multi.add(main)
        # A single result: accepting it is not augmentable.
        only = b.entities(main, 1)
        b.system("i found one match : " + only[0]["name"] + " .", only)
        b.user("okay book " + only[0]["name"], {main: {b.name_slot(main): only[0]["name"]}})
    elif kind == "single":
        opening(b, main)
        offer(b, main, 1, 0)
    elif kind == "final":
        opening(b, main)
        b.chatter_until(TURNS - 1, main)
        results = b.entities(main, 3)
        b.system("before you go there are " + " or ".join(r["name"] for r in results) + " .",
                 results)
        multi.add(main)
    elif kind == "absent":
        opening(b, main)
        table = SERVICES[main][0]
        phantoms = rng.sample(PHANTOMS, 3)
        results = [{"domain": main, "name": p, "attributes": {"area": "north"}} for p in phantoms]
        b.system("i have " + " or ".join(phantoms) + " .", results)
        b.user("yes please book " + phantoms[0], {main: {b.name_slot(main): phantoms[0]}})
        multi.add(main)
        assert table in db["tables"]
    elif kind == "taxi":
        b.user("i need a taxi from the station", {"taxi": {"taxi-departure": "station"}})
        cars = [{"domain": "taxi", "name": c, "attributes": {}} for c in rng.sample(TAXIS, 3)]
        b.system("i can send " + " or ".join(c["name"] for c in cars) + " .", cars)
        b.user("the " + cars[1]["name"] + " please", {"taxi": {"taxi-name": cars[1]["name"]}})
        multi.add("taxi")
    elif kind == "preexisting":
        known = b.entities(main, 1)[0]
        b.user("i want to stay at " + known["name"],
               {main: {b.name_slot(main): known["name"]}})
        b.system("what else do you need ?")
        b.user("does it have parking")
        others = b.entities(main, 2, avoid=(known["name"],))
        results = [others[0], known, others[1]]
        b.system("here are " + " or ".join(r["name"] for r in results) + " .", results)
        b.user("i will stick with " + known["name"], {main: {b.name_slot(main): known["name"]}})
        multi.add(main)
    elif kind == "plain":
        opening(b, main)
    else:
        raise ValueError(kind)

    b.chatter_until(TURNS, main)
    return b.dump(), expected, multi


def main():
    db = json.loads((ROOT / "data" / "db" / "dsr_db.json").read_text())
    rng = random.Random(7)
    dialogs = []
    expected = []
    dialogs_with_multi = 0
    service_dialogs = {}
    service_multi = {}
    index = 0
    for kind, services, count in PLAN:
        for _ in range(count):
            dialog, turns, multi = build(kind, services, index, db, rng)
            dialogs.append(dialog)
            for t in turns:
                expected.append({"dialog_id": dialog["dialog_id"], "turn_index": t})
            if multi:
                dialogs_with_multi += 1
            for s in dialog["services"]:
                key = s.lower()
                service_dialogs[key] = service_dialogs.get(key, 0) + 1
                service_multi[key] = service_multi.get(key, 0) + (1 if s in multi else 0)
            index += 1
    assert len(dialogs) == 50

    out = ROOT / "data" / "toy"
    out.mkdir(parents=True, exist_ok=True)
    header = {"corpus": {"split": "test", "source_format": "native"}}
    lines = [json.dumps(header, separators=(",", ":"))]
    lines += [json.dumps(d, separators=(",", ":"), ensure_ascii=False) for d in dialogs]
    (out / "corpus.jsonl").write_text("\n".join(lines) + "\n")

    annotations = {
        "dialogs_total": len(dialogs),
        "turns_total": TURNS * len(dialogs),
        "augmentable_turns": expected,
        "dialogs_with_augmentable_turns": len({e["dialog_id"] for e in expected}),
        "multi_result": {
            "dialogs_with_multi_results": dialogs_with_multi,
            "overall": dialogs_with_multi / len(dialogs),
            "per_service": {
                s: {"dialogs": service_dialogs[s], "with_multi_results": service_multi[s]}
                for s in sorted(service_dialogs)
            },
        },
    }
    (out / "annotations.json").write_text(json.dumps(annotations, indent=1) + "\n")


if __name__ == "__main__":
    main()
