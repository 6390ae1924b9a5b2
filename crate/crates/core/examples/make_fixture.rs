//! Regenerates the synthetic fixture corpus and lexicons under
//! `data/fixtures/`.
//!
//!     cargo run -p emotopic --example make_fixture
//!
//! Output is a pure function of the seed below, so rerunning it on a clean
//! checkout should leave `git status` empty.

use std::fmt::Write as _;
use std::path::Path;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

const SEED: u64 = 20_240_311;

const FILLER: &[&str] = &[
    "i", "you", "the", "we", "it's", "so", "and", "just", "um", "yeah", "like", "know", "think", "really", "that",
    "was", "to", "of", "in", "with", "they", "don't", "oh", "mean", "well", "a", "is", "about", "going", "got", "uh",
    "maybe", "then", "when", "because", "my", "our", "stuff", "okay",
];

const IDD_TOPICS: &[&[&str]] = &[
    &[
        "school",
        "teacher",
        "class",
        "homework",
        "bus",
        "iep",
        "classroom",
        "grades",
        "principal",
        "aide",
        "reading",
        "math",
        "semester",
    ],
    &[
        "doctor",
        "appointment",
        "medication",
        "therapy",
        "hospital",
        "insurance",
        "seizure",
        "sleep",
        "diet",
        "nurse",
        "clinic",
        "specialist",
        "diagnosis",
    ],
    &[
        "money",
        "job",
        "work",
        "paycheck",
        "bills",
        "budget",
        "benefits",
        "savings",
        "shift",
        "manager",
        "expensive",
        "afford",
        "rent",
    ],
    &[
        "dinner",
        "chores",
        "laundry",
        "kitchen",
        "bedtime",
        "morning",
        "routine",
        "grandma",
        "church",
        "groceries",
        "cooking",
        "bath",
        "dishes",
    ],
    &[
        "future",
        "independence",
        "apartment",
        "college",
        "driving",
        "license",
        "guardianship",
        "housing",
        "program",
        "transition",
        "skills",
        "adult",
        "graduation",
    ],
];

const PEER_TOPICS: &[&[&str]] = &[
    &[
        "class", "teacher", "homework", "test", "exam", "grades", "locker", "project", "quiz", "essay",
    ],
    &[
        "soccer",
        "basketball",
        "practice",
        "coach",
        "team",
        "score",
        "tournament",
        "gym",
        "season",
        "jersey",
    ],
    &[
        "minecraft",
        "xbox",
        "level",
        "controller",
        "online",
        "server",
        "stream",
        "fortnite",
        "console",
        "headset",
    ],
    &[
        "band", "song", "concert", "guitar", "playlist", "album", "singer", "drums", "lyrics", "choir",
    ],
    &[
        "pizza",
        "burger",
        "snack",
        "tacos",
        "restaurant",
        "dessert",
        "cookies",
        "fries",
        "breakfast",
        "smoothie",
    ],
    &[
        "movie",
        "mall",
        "sleepover",
        "party",
        "birthday",
        "beach",
        "trip",
        "camping",
        "saturday",
        "sunday",
    ],
    &[
        "group",
        "chat",
        "text",
        "rumor",
        "drama",
        "crush",
        "message",
        "phone",
        "instagram",
        "snapchat",
    ],
    &[
        "dog", "cat", "puppy", "vet", "leash", "fish", "hamster", "kitten", "cage", "treats",
    ],
];

const POSITIVE: &[&str] = &[
    "happy",
    "fun",
    "love",
    "glad",
    "proud",
    "good",
    "great",
    "nice",
    "awesome",
    "kind",
    "safe",
    "helpful",
    "excited",
    "hope",
    "enjoy",
    "best",
    "better",
    "cool",
    "amazing",
    "friendly",
    "laugh",
    "wonderful",
    "easy",
    "win",
    "calm",
    "thank",
    "thanks",
    "beautiful",
    "honest",
    "yay",
    "pretty",
    "celebrate",
];

const NEGATIVE: &[&str] = &[
    "sad",
    "angry",
    "mad",
    "hate",
    "bad",
    "worse",
    "worst",
    "hard",
    "scared",
    "afraid",
    "worry",
    "nervous",
    "lonely",
    "hurt",
    "sick",
    "gross",
    "awful",
    "annoyed",
    "unfair",
    "problem",
    "difficult",
    "tired",
    "boring",
    "lost",
    "cry",
    "fight",
    "ugh",
    "stress",
    "stressful",
    "broke",
    "expensive",
    "disappointed",
];

/// (word, emotion, score) rows of the synthetic association lexicon.
const LEXICON: &[(&str, &str, f64)] = &[
    ("money", "anticipation", 0.586),
    ("money", "joy", 0.531),
    ("money", "trust", 0.359),
    ("kind", "joy", 0.453),
    ("angry", "anger", 0.844),
    ("mad", "anger", 0.719),
    ("furious", "anger", 0.929),
    ("annoyed", "anger", 0.547),
    ("hate", "anger", 0.828),
    ("hate", "disgust", 0.641),
    ("fight", "anger", 0.652),
    ("unfair", "anger", 0.578),
    ("yell", "anger", 0.688),
    ("hope", "anticipation", 0.609),
    ("excited", "anticipation", 0.703),
    ("excited", "joy", 0.656),
    ("future", "anticipation", 0.516),
    ("plan", "anticipation", 0.453),
    ("waiting", "anticipation", 0.5),
    ("soon", "anticipation", 0.406),
    ("graduation", "anticipation", 0.664),
    ("graduation", "joy", 0.617),
    ("gross", "disgust", 0.781),
    ("disgusting", "disgust", 0.906),
    ("nasty", "disgust", 0.742),
    ("sick", "disgust", 0.5),
    ("sick", "sadness", 0.469),
    ("yuck", "disgust", 0.703),
    ("awful", "disgust", 0.602),
    ("awful", "sadness", 0.547),
    ("worry", "fear", 0.633),
    ("worry", "sadness", 0.406),
    ("worry", "anticipation", 0.297),
    ("scared", "fear", 0.812),
    ("afraid", "fear", 0.766),
    ("nervous", "fear", 0.594),
    ("anxious", "fear", 0.664),
    ("danger", "fear", 0.852),
    ("risk", "fear", 0.547),
    ("hospital", "fear", 0.578),
    ("hospital", "sadness", 0.453),
    ("doctor", "trust", 0.602),
    ("doctor", "fear", 0.32),
    ("happy", "joy", 0.742),
    ("fun", "joy", 0.648),
    ("love", "joy", 0.828),
    ("love", "trust", 0.5),
    ("glad", "joy", 0.625),
    ("proud", "joy", 0.602),
    ("laugh", "joy", 0.578),
    ("celebrate", "joy", 0.719),
    ("pretty", "joy", 0.391),
    ("good", "joy", 0.422),
    ("good", "trust", 0.375),
    ("sad", "sadness", 0.781),
    ("miss", "sadness", 0.547),
    ("lonely", "sadness", 0.797),
    ("cry", "sadness", 0.703),
    ("lost", "sadness", 0.516),
    ("hurt", "sadness", 0.664),
    ("hurt", "anger", 0.406),
    ("disappointed", "sadness", 0.68),
    ("surprised", "surprise", 0.789),
    ("wow", "surprise", 0.617),
    ("suddenly", "surprise", 0.547),
    ("shocked", "surprise", 0.852),
    ("unexpected", "surprise", 0.703),
    ("trust", "trust", 0.734),
    ("friend", "trust", 0.562),
    ("friend", "joy", 0.5),
    ("teacher", "trust", 0.484),
    ("help", "trust", 0.453),
    ("safe", "trust", 0.602),
    ("honest", "trust", 0.703),
    ("family", "trust", 0.5),
];

/// Researcher code and the lexicon words that typically voice it.
const CODES: &[(&str, &[&str])] = &[
    ("expresses gratitude", &["thank", "glad", "kind", "love"]),
    ("expresses joy", &["happy", "fun", "laugh", "celebrate", "proud"]),
    ("expresses love", &["love"]),
    ("expresses like", &["good", "pretty", "fun"]),
    ("expresses worry", &["worry", "nervous", "anxious", "risk"]),
    ("expresses confusion", &["suddenly", "worry"]),
    ("expresses anger", &["angry", "mad", "furious", "yell"]),
    ("expresses frustration", &["annoyed", "unfair", "hate"]),
    ("expresses hope", &["hope", "future", "soon", "plan"]),
    ("expresses excitement", &["excited", "graduation", "waiting"]),
    ("expresses disgust", &["gross", "disgusting", "yuck", "nasty"]),
    ("expresses fear", &["scared", "afraid", "danger"]),
    ("expresses sadness", &["sad", "lonely", "cry", "miss"]),
    ("expresses disappointment", &["disappointed", "lost", "hurt"]),
    ("expresses surprise", &["surprised", "wow", "shocked", "unexpected"]),
    ("expresses sarcasm", &["wow", "great"]),
];

struct Plan {
    prefix: &'static str,
    cohort: &'static str,
    dyad_kind: &'static str,
    count: usize,
}

const PLANS: &[Plan] = &[
    Plan {
        prefix: "PPS",
        cohort: "IDD_FAMILY",
        dyad_kind: "PARENT_PARENT_OR_SIBLING",
        count: 29,
    },
    Plan {
        prefix: "PC",
        cohort: "IDD_FAMILY",
        dyad_kind: "PARENT_CHILD",
        count: 9,
    },
    Plan {
        prefix: "FR",
        cohort: "PEER",
        dyad_kind: "FRIENDS",
        count: 25,
    },
];

fn utterance(rng: &mut ChaCha8Rng, topics: &[&[&str]], main: (usize, usize), mood: f64) -> (String, Vec<String>) {
    let topic = match rng.random_range(0..20) {
        0..14 => main.0,
        14..19 => main.1,
        _ => rng.random_range(0..topics.len()),
    };
    let mut words: Vec<String> = Vec::new();
    for _ in 0..rng.random_range(1..=3) {
        words.push(topics[topic].choose(rng).unwrap().to_string());
    }
    for _ in 0..rng.random_range(3..=7) {
        words.push(FILLER.choose(rng).unwrap().to_string());
    }
    let mut labels = Vec::new();
    if rng.random_bool(0.22) {
        let (code, voices) = CODES.choose(rng).unwrap();
        labels.push(code.to_string());
        let roll: f64 = rng.random();
        if roll < 0.8 {
            words.push(voices.choose(rng).unwrap().to_string());
        } else if roll < 0.9 {
            words.push(LEXICON.choose(rng).unwrap().0.to_string());
        }
        if rng.random_bool(0.08) {
            labels.push(CODES.choose(rng).unwrap().0.to_string());
        }
    } else {
        let roll: f64 = rng.random();
        if roll < 0.10 + 0.08 * mood {
            words.push(POSITIVE.choose(rng).unwrap().to_string());
        } else if roll < 0.22 {
            words.push(NEGATIVE.choose(rng).unwrap().to_string());
        }
    }
    words.shuffle(rng);
    let mut text = words.join(" ");
    if let Some(first) = text.get_mut(0..1) {
        first.make_ascii_uppercase();
    }
    text.push(if rng.random_bool(0.2) { '?' } else { '.' });
    (text, labels)
}

fn corpus(rng: &mut ChaCha8Rng) -> String {
    let mut out = String::new();
    for plan in PLANS {
        let topics = if plan.cohort == "PEER" { PEER_TOPICS } else { IDD_TOPICS };
        for n in 1..=plan.count {
            let id = format!("{}{n:02}", plan.prefix);
            let time_point = if n % 2 == 1 { "T1" } else { "T2" };
            let first = rng.random_range(0..topics.len());
            let second = (first + rng.random_range(1..topics.len())) % topics.len();
            let mood: f64 = rng.random_range(-1.0..1.0);
            let n_lines = rng.random_range(40..=110);
            for line_index in 0..n_lines {
                let (text, labels) = utterance(rng, topics, (first, second), mood);
                let mut row = json!({
                    "transcript_id": id,
                    "line_index": line_index,
                    "speaker": if line_index % 2 == 0 { "A" } else { "B" },
                    "text": text,
                    "cohort": plan.cohort,
                    "time_point": time_point,
                    "dyad_kind": plan.dyad_kind,
                });
                if !labels.is_empty() {
                    row["labels"] = json!(labels);
                }
                writeln!(out, "{row}").unwrap();
            }
        }
    }
    out
}

fn lexicon_tsv() -> String {
    let mut out = String::from("word\temotion\tscore\n");
    for (word, emotion, score) in LEXICON {
        writeln!(out, "{word}\t{emotion}\t{score}").unwrap();
    }
    // Sentiment rows and zero scores occur in real lexicon dumps and are skipped.
    out.push_str("happy\tpositive\t1\nsad\tnegative\t1\ntable\tjoy\t0\n");
    out
}

fn word_list(header: &str, words: &[&str]) -> String {
    let mut sorted = words.to_vec();
    sorted.sort_unstable();
    let mut out = format!(";\n; {header}\n;\n");
    for w in sorted {
        writeln!(out, "{w}").unwrap();
    }
    out
}

const CONFIG: &str = "\
# Fixture run configuration; paths are relative to this file.
corpus = \"corpus.jsonl\"
emotion_lexicon = \"emotion_lexicon.tsv\"
adaptations = \"adaptations.tsv\"
positive_words = \"positive-words.txt\"
negative_words = \"negative-words.txt\"
seed = 7

[sentiment]
cohort = \"idd\"
cases = 24

[topics]
cohort = \"idd\"
k = 5
";

fn main() -> std::io::Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/fixtures");
    std::fs::create_dir_all(&dir)?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    std::fs::write(dir.join("corpus.jsonl"), corpus(&mut rng))?;
    std::fs::write(dir.join("emotion_lexicon.tsv"), lexicon_tsv())?;
    std::fs::write(
        dir.join("adaptations.tsv"),
        "# word\temotion pairs removed from the lexicon\nkind\tjoy\n",
    )?;
    std::fs::write(
        dir.join("positive-words.txt"),
        word_list("Synthetic positive word list", POSITIVE),
    )?;
    std::fs::write(
        dir.join("negative-words.txt"),
        word_list("Synthetic negative word list", NEGATIVE),
    )?;
    std::fs::write(dir.join("fixture.toml"), CONFIG)?;
    println!("wrote fixtures to {}", dir.display());
    Ok(())
}
