#!/usr/bin/env python3
"""Regenerate the bundled part-of-speech lexicon (data/pos_lexicon.tsv).

The lexicon maps lowercase lemmas to an ordered candidate tag list drawn
from {NOUN, VERB, ADJ, OTHER}, most frequent tag first. The word inventory
below was assembled from common English frequency lists plus app-store
vocabulary (reviews and changelogs) and is frozen; rerunning this script
reproduces the bundled file byte for byte.

An external tagged word list ("word<TAB>PENNTAG" per line) can be merged
in with --from-tagged-list; Penn tags are collapsed onto the four-tag
scheme (NN* -> NOUN, VB* -> VERB, JJ* -> ADJ, everything else -> OTHER).

Usage:
    python scripts/build_lexicon.py [--from-tagged-list FILE] [-o OUT]
"""

import argparse
import sys
from pathlib import Path

DEFAULT_OUT = Path(__file__).resolve().parents[1] / "src" / "notematch" / "data" / "pos_lexicon.tsv"

NOUN_WORDS = """
ability access account ad addition address ads advertisement album alarm
alert algorithm amount animation answer app apple application appointment
area artist aspect attempt audio autoplay background badge balance band
banner bar battery bill bit bluetooth body book bookmark bottom box brand
browser bug bundle business button cache calendar call camera card cart
case category cell chance change channel chart chat checkout choice city
clip clock code collection color comment community company connection
contact content control copy corner country couple coupon crash credit
customer dance dashboard data date deal delivery design desktop detail
developer device difference direction discount display document dollar
download draft drive driver duplicate echo edit editor effect email end
episode error event everyone exchange experience export eye face family
fan favorite feature fee feed feedback file filter fingerprint fix flair
folder follower font form format forum freeze friend function gallery game
genre gesture gift glitch goal group guide hand hashtag header headphone
heart help history home homepage hour house icon idea image improvement
inbox info information instruction interface internet interval invite
issue item job keyboard kid label lag landscape language laptop layout
letter level library life light limit line link list location lock login
logo look lot love lyric mail manager map mark market math member membership
memory menu message mind minute mode moment money month mood morning movie
music name network news night nobody note notification number offer office
option order page part partner password pause payment people percent
performance permission person phone photo picture piece pin place plan
platform play player playlist podcast point policy popup portrait post
premium preset price principle privacy problem process product profile
program progress purchase quality question queue radio rate rating reason
receipt recommendation record refund region release reminder removal reply
report request response rest result review reviewer ringtone role room
sale scan schedule school screen screenshot scroll search season second
section security series server service session setting share shipping
shop shuffle side sidebar sign singer site situation size skin skip sleep
slider software something son song sort sound soundtrack space speaker
speed stability star start state station stats status step sticker storage
store story stream streak student stuff style subreddit subscriber
subscription suggestion support surface swipe system tab tablet tag tap
team tempo term test text theme thing thread thumbnail time tip title today
ton tool top topic touch track tracker traffic translation translator trial
trouble tune tuner tutorial tv type ui uninstall unlock upc update upgrade
upload usage user verification version video view viewer voice volume wait
wallpaper watch way web website week widget wifi window wish wishlist word
work workout world year zoom
""".split()

VERB_WORDS = """
accept access add adjust allow announce appear apply ask autocorrect
become begin believe block break bring browse buffer buy call cancel care
cast change charge chat check choose clear click close collapse come
complain confirm connect contact continue copy cost crash create crop cut
decide delete deliver describe deserve disable disappear disconnect
dislike dismiss display download drag drain draw drop edit empty enable
end enjoy enter exist exit expand expect explain export fail feel fetch
fill find finish fix flag flip follow force forget freeze get give go
happen hate have hear help hide hit hold hope ignore import improve
include increase install introduce invite join jump keep kill know lag
launch lead learn leave let like link list listen live load lock log
login look lose make manage mark match mean mention merge mess mind miss
move mute need notice notify open organize overlap override pass pause
pay pick pin place play post prefer press prevent print pull purchase
push put reach read realize receive recommend reconnect record redesign
redo refresh refund register reinstall release reload rely remember
remind remove rename render reopen reorder repeat replace reply report
request require reset resize resolve respond restart restore resume
retry return revert review rewind ring roll rotate run save say scan
schedule screenshot scroll search see seem select sell send set share
ship show shuffle shut sign skip sleep slide solve sort sound speak
spend start stay stop store stream stutter submit subscribe suck suggest
support swipe switch sync tag take talk tap tell text thank think throw
time to toggle touch track translate try turn type undo uninstall unlock
unmute unsubscribe update upgrade upload use verify view wait wake want
warn waste watch wish wonder work write zoom
""".split()

ADJ_WORDS = """
able actual amazing annoying automatic available awesome awful bad basic
beautiful best better big black blank blue bright broken buggy busy
capable certain cheap clean clear clunky cold compatible complete
confusing consistent constant convenient cool correct crazy current cute
daily dark dead decent default difficult disappointing double dumb easy
empty endless entire excellent excessive expensive extra fair famous
fancy fantastic fast favorite final fine first flat free frequent fresh
frozen frustrating full fun functional glad glitchy good gray great green
happy hard helpful high horrible huge important impossible inconsistent
incorrect incredible instant intuitive invisible laggy large last late
latest lazy light little live loud lovely low loyal mad main major manual
many mobile modern monthly multiple musical native necessary negative new
nice normal obvious offline okay old online open original overall perfect
permanent personal pink pointless poor popular portrait positive possible
premium pretty previous prior private pro proper proud public purple
quick quiet random rare ready real recent red regular relevant reliable
responsive ridiculous rough sad safe secure separate short sick silent
similar simple single sleek slow smart smooth social solid sorry special
specific stable standard steep sticky straight strange stuck stupid
sudden super sure sweet terrible tiny tired top tough ugly unable
unacceptable unavailable uncomfortable unhappy unnecessary unplayable
unreadable unresponsive unstable unusable upset useful useless usual
visible visual warm weekly weird white whole wide wireless wonderful
worse worst worth wrong yellow young
""".split()

# Lemmas whose most frequent tag differs from list-insertion order, or that
# need a candidate order the three lists cannot express.
OVERRIDES = {
    "access": "NOUN,VERB",
    "add": "VERB",
    "change": "VERB,NOUN",
    "check": "VERB,NOUN",
    "click": "VERB,NOUN",
    "crash": "VERB,NOUN",
    "dark": "ADJ,NOUN",
    "edit": "VERB,NOUN",
    "find": "VERB",
    "fix": "VERB,NOUN",
    "free": "ADJ,VERB",
    "help": "VERB,NOUN",
    "light": "ADJ,NOUN",
    "like": "VERB,ADJ",
    "live": "VERB,ADJ",
    "load": "VERB,NOUN",
    "login": "NOUN,VERB",
    "need": "VERB,NOUN",
    "open": "VERB,ADJ",
    "play": "VERB,NOUN",
    "post": "VERB,NOUN",
    "search": "NOUN,VERB",
    "scroll": "VERB,NOUN",
    "skip": "VERB,NOUN",
    "support": "VERB,NOUN",
    "update": "NOUN,VERB",
    "use": "VERB,NOUN",
    "watch": "VERB,NOUN",
    "work": "VERB,NOUN",
}

PENN_COLLAPSE = {"NN": "NOUN", "VB": "VERB", "JJ": "ADJ"}


def collapse_penn(tag):
    return PENN_COLLAPSE.get(tag[:2].upper(), "OTHER")


def build_entries(tagged_list_path=None):
    entries = {}
    for words, tag in ((NOUN_WORDS, "NOUN"), (VERB_WORDS, "VERB"), (ADJ_WORDS, "ADJ")):
        for word in words:
            tags = entries.setdefault(word, [])
            if tag not in tags:
                tags.append(tag)
    if tagged_list_path:
        with open(tagged_list_path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line or "\t" not in line:
                    continue
                word, penn = line.split("\t", 1)
                tag = collapse_penn(penn)
                tags = entries.setdefault(word.lower(), [])
                if tag not in tags:
                    tags.append(tag)
    for word, order in OVERRIDES.items():
        entries[word] = order.split(",")
    return entries


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--from-tagged-list", default=None, help="merge a word<TAB>PENNTAG list")
    parser.add_argument("-o", "--out", default=str(DEFAULT_OUT))
    args = parser.parse_args(argv)

    entries = build_entries(args.from_tagged_list)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", encoding="utf-8") as fh:
        for word in sorted(entries):
            fh.write(f"{word}\t{','.join(entries[word])}\n")
    print(f"wrote {len(entries)} lexicon entries to {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
