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

"""Writes data/db/dsr_db.json, the entity tables used for synthesis.

Names are "<head word> <tail word>" with head words unique inside a domain,
so no name is a token window of another. Attribute values never share a
token with names or with the grammar's literal words.
"""

import json
import pathlib
import random

ROOT = pathlib.Path(__file__).resolve().parent.parent
PER_DOMAIN = 30

HEADS = """
alder bramble cobalt dorado ember fennel galway hawthorn indigo juniper
kestrel lantana marigold nutmeg oberon pavlova quartz rosewood saffron
tamarind umber verbena wisteria xanadu yarrow zephyr basil cedar dahlia
elmira fjord gingko heron iris jasper kelpie lupin mistral nimbus orchid
pepper quince raven sorrel thistle ursa violet willow yucca zinnia acacia
bishop cypress dune falcon garnet hazel ivory jade kodiak lotus mango
nectar opal plume ruby sage topaz velvet walnut azalea birch clover delta
echo fable glacier harbor island jubilee karma lagoon meadow nova oasis
pebble quill ripple sierra tundra unity vista whistle amethyst beacon
comet drift emerald fiesta granite halcyon ingot jetty krypton lilac
monsoon nettle onyx prairie rhapsody solstice trellis utopia vortex
wren yonder zenith anchor bayou canyon dynamo fresco gazebo
horizon igloo jigsaw kingfisher lantern mosaic nomad orbit paragon
quasar rambler sapphire tempest umbra voyager wharf yeti zodiac arbor
blossom citadel dervish elixir fountain gondola hemlock inkwell javelin
""".split()

AREA = ["north", "south", "east", "west", "centre"]
PRICE = ["cheap", "moderate", "expensive"]
CITY = ["london", "paris", "berlin", "chicago", "seattle", "denver", "boston",
        "austin", "toronto", "madrid"]
CUISINE = ["italian", "chinese", "indian", "thai", "french", "mexican",
           "spanish", "korean", "japanese", "lebanese"]
MOVIE_GENRE = ["comedy", "drama", "thriller", "horror", "animation",
               "documentary", "romance", "western"]
MUSIC_GENRE = ["jazz", "rock", "pop", "country", "reggae", "blues", "metal",
               "funk"]
EVENT_CATEGORY = ["sports", "concert", "theater", "festival", "exhibition"]
HOTEL_STYLE = ["modern", "classic", "rustic", "boutique", "historic"]
ATTRACTION_TYPE = ["architecture", "cinema", "college", "nightclub",
                   "theatre", "boat", "swimmingpool", "entertainment"]
RATING = ["excellent", "average", "mediocre", "outstanding", "decent"]
LANGUAGE = ["english", "german", "portuguese", "hindi", "mandarin", "arabic"]
SPECIALTY = ["cardiology", "dermatology", "pediatrics", "neurology",
             "orthopedics", "oncology"]
THERAPY = ["psychologist", "psychiatrist", "counselor", "hypnotherapist"]
PET = ["pets allowed", "no pets"]
FURNISHED = ["furnished", "unfurnished"]
STYLIST = ["unisex", "barbershop", "beauty"]
RELATION = ["coworker", "neighbor", "cousin", "classmate", "roommate"]
DECADE = ["sixties", "seventies", "eighties", "nineties", "millennial"]

TAILS = {
    "food": ["kitchen", "grill", "bistro", "diner", "tavern", "eatery",
             "canteen", "brasserie", "trattoria", "noodle bar"],
    "lodging": ["lodge", "inn", "suites", "resort", "retreat", "manor",
                "residence", "towers"],
    "sight": ["gardens", "hall", "pavilion", "tower", "square", "arcade",
              "observatory", "quarter"],
    "event": ["cup", "showcase", "gala", "open", "jam", "summit", "fair",
              "parade"],
    "home": ["apartments", "court", "terrace", "heights", "villas",
             "commons", "plaza", "crossing"],
    "film": ["rising", "legacy", "chronicles", "protocol", "frontier",
             "requiem", "odyssey", "reckoning"],
    "song": ["lullaby", "anthem", "serenade", "ballad", "groove", "melody",
             "overture", "refrain"],
    "person": ["abbott", "brennan", "castillo", "dawson", "everett", "fowler",
               "gallagher", "hadley", "ingram", "jennings"],
}

# domain: (name field, noun, tail family, {attribute: values})
DOMAINS = {
    "restaurant": ("name", "restaurant", "food",
                   {"area": AREA, "pricerange": PRICE, "food": CUISINE}),
    "hotel": ("name", "hotel", "lodging",
              {"area": AREA, "pricerange": PRICE, "style": HOTEL_STYLE}),
    "attraction": ("name", "attraction", "sight",
                   {"area": AREA, "type": ATTRACTION_TYPE}),
    "events_1": ("event_name", "event", "event",
                 {"city": CITY, "category": EVENT_CATEGORY}),
    "events_3": ("event_name", "event", "event",
                 {"city": CITY, "category": EVENT_CATEGORY, "rating": RATING}),
    "homes_1": ("property_name", "apartment", "home",
                {"area": AREA, "pets": PET, "furnishing": FURNISHED}),
    "homes_2": ("property_name", "property", "home",
                {"city": CITY, "pets": PET, "furnishing": FURNISHED}),
    "hotels_1": ("hotel_name", "hotel", "lodging",
                 {"city": CITY, "style": HOTEL_STYLE, "rating": RATING}),
    "hotels_3": ("hotel_name", "hotel", "lodging",
                 {"city": CITY, "pricerange": PRICE, "style": HOTEL_STYLE}),
    "hotels_4": ("place_name", "hotel", "lodging",
                 {"city": CITY, "rating": RATING}),
    "media_1": ("title", "movie", "film",
                {"genre": MOVIE_GENRE, "language": LANGUAGE}),
    "media_2": ("movie_name", "movie", "film",
                {"genre": MOVIE_GENRE, "rating": RATING}),
    "media_3": ("title", "movie", "film",
                {"genre": MOVIE_GENRE, "language": LANGUAGE, "era": DECADE}),
    "messaging_1": ("contact_name", "contact", "person",
                    {"city": CITY, "relation": RELATION}),
    "movies_1": ("movie_name", "movie", "film",
                 {"genre": MOVIE_GENRE, "city": CITY}),
    "movies_2": ("title", "movie", "film",
                 {"genre": MOVIE_GENRE, "rating": RATING}),
    "movies_3": ("movie_title", "movie", "film",
                 {"genre": MOVIE_GENRE, "era": DECADE}),
    "music_1": ("song_name", "song", "song",
                {"genre": MUSIC_GENRE, "era": DECADE}),
    "music_2": ("song_name", "song", "song",
                {"genre": MUSIC_GENRE, "language": LANGUAGE}),
    "music_3": ("track", "song", "song",
                {"genre": MUSIC_GENRE, "era": DECADE, "rating": RATING}),
    "restaurants_1": ("restaurant_name", "restaurant", "food",
                      {"city": CITY, "pricerange": PRICE, "food": CUISINE}),
    "restaurants_2": ("restaurant_name", "restaurant", "food",
                      {"city": CITY, "food": CUISINE, "rating": RATING}),
    "services_1": ("stylist_name", "salon", "person",
                   {"city": CITY, "specialty": STYLIST}),
    "services_2": ("dentist_name", "dentist", "person",
                   {"city": CITY, "language": LANGUAGE}),
    "services_3": ("doctor_name", "doctor", "person",
                   {"city": CITY, "specialty": SPECIALTY}),
    "services_4": ("therapist_name", "therapist", "person",
                   {"city": CITY, "specialty": THERAPY}),
    "travel_1": ("attraction_name", "attraction", "sight",
                 {"city": CITY, "type": ATTRACTION_TYPE}),
}


def make_table(domain, spec, rng):
    field, _, family, attributes = spec
    heads = list(HEADS)
    rng.shuffle(heads)
    if domain == "restaurant":
        heads.insert(0, "chiquito")
    records = []
    for i in range(PER_DOMAIN):
        if domain == "restaurant" and i == 0:
            name = "chiquito restaurant bar"
        else:
            name = heads[i] + " " + rng.choice(TAILS[family])
        record = {field: name}
        for attr, values in attributes.items():
            record[attr] = rng.choice(values)
        records.append(record)
    return records


def main():
    rng = random.Random(20260115)
    db = {"name_fields": {}, "nouns": {}, "tables": {}}
    for domain, spec in DOMAINS.items():
        db["name_fields"][domain] = spec[0]
        db["nouns"][domain] = spec[1]
        db["tables"][domain] = make_table(domain, spec, rng)
    out = ROOT / "data" / "db" / "dsr_db.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(db, indent=1) + "\n")


if __name__ == "__main__":
    main()
