//! Lexicon-based emotion classification and the aggregate views built on it:
//! emotion distributions, mean intensity per cohort and time point, and the
//! most common trigger words per emotion.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::corpus::{Cohort, EmotionSubset, TimePoint, Transcript, Utterance};
use crate::error::{Error, Result};
use crate::lexicon::EmotionLexicon;
use crate::taxonomy::{Emotion, LabelClass};
use crate::textprep::{normalize, FilterConfig};

/// Result of classifying one token sequence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Classification {
    pub emotion: Emotion,
    pub score: f64,
    pub trigger_word: String,
    /// Highest score reached by each emotion that had any hit.
    pub candidates: BTreeMap<Emotion, f64>,
    /// Every distinct (emotion, word) hit in the utterance.
    pub hits: BTreeSet<(Emotion, String)>,
}

/// Pick the single highest-scoring (emotion, word) association among the tokens.
///
/// Ties on score go to the emotion earlier in [`Emotion::ALL`], then to the
/// lexicographically smaller word. Repeated words do not accumulate.
pub fn classify_utterance<S: AsRef<str>>(tokens: &[S], lex: &EmotionLexicon) -> Option<Classification> {
    let mut best: Option<(Emotion, f64, &str)> = None;
    let mut candidates: BTreeMap<Emotion, f64> = BTreeMap::new();
    let mut hits = BTreeSet::new();

    for token in tokens {
        let token = token.as_ref();
        let Some(assocs) = lex.lookup(token) else {
            continue;
        };
        for (&emotion, &score) in assocs {
            hits.insert((emotion, token.to_string()));
            let slot = candidates.entry(emotion).or_insert(score);
            if score > *slot {
                *slot = score;
            }
            let better = match best {
                None => true,
                Some((e, s, w)) => score > s || (score == s && (emotion < e || (emotion == e && token < w))),
            };
            if better {
                best = Some((emotion, score, token));
            }
        }
    }

    best.map(|(emotion, score, word)| Classification {
        emotion,
        score,
        trigger_word: word.to_string(),
        candidates,
        hits,
    })
}

/// A classified utterance with the metadata needed for grouping.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmotionAssignment {
    pub transcript_id: String,
    pub line_index: usize,
    pub cohort: Cohort,
    pub time_point: TimePoint,
    #[serde(flatten)]
    pub classification: Classification,
}

impl EmotionAssignment {
    pub fn emotion(&self) -> Emotion {
        self.classification.emotion
    }

    pub fn score(&self) -> f64 {
        self.classification.score
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UtteranceRef {
    pub transcript_id: String,
    pub line_index: usize,
    pub cohort: Cohort,
    pub time_point: TimePoint,
}

#[derive(Debug, Clone, Default)]
pub struct ClassifiedSubset {
    pub assignments: Vec<EmotionAssignment>,
    pub unclassified: Vec<UtteranceRef>,
}

/// Classify each distinct utterance of an emotion subset once.
pub fn classify_subset(subset: &EmotionSubset<'_>, lex: &EmotionLexicon, filter: &FilterConfig) -> ClassifiedSubset {
    let mut out = ClassifiedSubset::default();
    for (transcript, utterance) in subset.utterances() {
        classify_into(&mut out, transcript, utterance, lex, filter);
    }
    out
}

fn classify_into(
    out: &mut ClassifiedSubset,
    transcript: &Transcript,
    utterance: &Utterance,
    lex: &EmotionLexicon,
    filter: &FilterConfig,
) {
    let tokens = normalize(&utterance.text, filter);
    match classify_utterance(&tokens, lex) {
        Some(classification) => out.assignments.push(EmotionAssignment {
            transcript_id: transcript.id.clone(),
            line_index: utterance.line_index,
            cohort: transcript.cohort,
            time_point: transcript.time_point,
            classification,
        }),
        None => out.unclassified.push(UtteranceRef {
            transcript_id: transcript.id.clone(),
            line_index: utterance.line_index,
            cohort: transcript.cohort,
            time_point: transcript.time_point,
        }),
    }
}

/// Proportion of assignments per emotion; every wheel emotion is present.
pub fn emotion_distribution(assignments: &[EmotionAssignment]) -> Result<BTreeMap<Emotion, f64>> {
    if assignments.is_empty() {
        return Err(Error::EmptyEmotionSubset);
    }
    let mut counts = [0usize; 8];
    for a in assignments {
        counts[a.emotion().index()] += 1;
    }
    let n = assignments.len() as f64;
    Ok(Emotion::ALL
        .into_iter()
        .map(|e| (e, counts[e.index()] as f64 / n))
        .collect())
}

/// Proportion of (utterance, researcher class) pairs per class, including
/// apprehension. The denominator is the pair count.
pub fn label_distribution(classes: &[LabelClass]) -> Result<BTreeMap<LabelClass, f64>> {
    if classes.is_empty() {
        return Err(Error::EmptyEmotionSubset);
    }
    let n = classes.len() as f64;
    Ok(LabelClass::all()
        .map(|c| (c, classes.iter().filter(|&&x| x == c).count() as f64 / n))
        .collect())
}

/// Running (count, sum) for a mean. Merging is associative and commutative.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MeanAccumulator {
    pub count: usize,
    pub sum: f64,
}

impl MeanAccumulator {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        self.sum += x;
    }

    pub fn merge(self, other: Self) -> Self {
        Self {
            count: self.count + other.count,
            sum: self.sum + other.sum,
        }
    }

    pub fn mean(&self) -> Option<f64> {
        (self.count > 0).then(|| self.sum / self.count as f64)
    }
}

/// Mean chosen-emotion score per (cohort, time point) group and emotion.
/// Cells with no assignments are absent.
pub type IntensityTable = BTreeMap<(Cohort, TimePoint), BTreeMap<Emotion, f64>>;

/// The denominator for each cell is the number of utterances assigned to
/// that emotion in that group.
pub fn mean_intensity(assignments: &[EmotionAssignment]) -> IntensityTable {
    let mut acc: BTreeMap<(Cohort, TimePoint), BTreeMap<Emotion, MeanAccumulator>> = BTreeMap::new();
    for a in assignments {
        acc.entry((a.cohort, a.time_point))
            .or_default()
            .entry(a.emotion())
            .or_default()
            .push(a.score());
    }
    acc.into_iter()
        .map(|(group, cells)| {
            let cells = cells
                .into_iter()
                .filter_map(|(e, m)| m.mean().map(|v| (e, v)))
                .collect();
            (group, cells)
        })
        .collect()
}

/// Which lexicon hits count toward an emotion's word list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WordCountMode {
    /// Only the word that decided the classification.
    #[default]
    Trigger,
    /// Every word in a classified utterance associated with the emotion,
    /// counted once per utterance.
    AllHits,
}

impl std::str::FromStr for WordCountMode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "trigger" => Ok(WordCountMode::Trigger),
            "all-hits" | "all_hits" => Ok(WordCountMode::AllHits),
            other => Err(format!("unknown word count mode `{other}` (trigger, all-hits)")),
        }
    }
}

/// Most frequent words for `emotion`, count descending then word ascending.
pub fn top_emotion_words(
    assignments: &[EmotionAssignment],
    emotion: Emotion,
    k: usize,
    blocklist: &BTreeSet<String>,
    mode: WordCountMode,
) -> Vec<(String, usize)> {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for a in assignments {
        match mode {
            WordCountMode::Trigger => {
                if a.emotion() == emotion {
                    *counts.entry(a.classification.trigger_word.as_str()).or_default() += 1;
                }
            }
            WordCountMode::AllHits => {
                for (e, w) in &a.classification.hits {
                    if *e == emotion {
                        *counts.entry(w.as_str()).or_default() += 1;
                    }
                }
            }
        }
    }
    let mut rows: Vec<(String, usize)> = counts
        .into_iter()
        .filter(|(w, _)| !blocklist.contains(*w))
        .map(|(w, c)| (w.to_string(), c))
        .collect();
    rows.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    rows.truncate(k);
    rows
}

/// Per-group summary: distribution, intensity and coverage counts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmotionProfile {
    pub cohort: Cohort,
    pub time_point: Option<TimePoint>,
    pub proportions: BTreeMap<Emotion, f64>,
    pub mean_intensity: BTreeMap<Emotion, f64>,
    pub n_classified: usize,
    pub n_unclassified: usize,
}

/// Build the profile for one cohort, optionally restricted to a time point.
/// Returns `None` when the group has no classified utterances.
pub fn profile(classified: &ClassifiedSubset, cohort: Cohort, time_point: Option<TimePoint>) -> Option<EmotionProfile> {
    let in_group = |c: Cohort, t: TimePoint| c == cohort && time_point.is_none_or(|tp| tp == t);
    let members: Vec<EmotionAssignment> = classified
        .assignments
        .iter()
        .filter(|a| in_group(a.cohort, a.time_point))
        .cloned()
        .collect();
    let n_unclassified = classified
        .unclassified
        .iter()
        .filter(|u| in_group(u.cohort, u.time_point))
        .count();
    let proportions = emotion_distribution(&members).ok()?;

    let mut acc: BTreeMap<Emotion, MeanAccumulator> = BTreeMap::new();
    for a in &members {
        acc.entry(a.emotion()).or_default().push(a.score());
    }
    let mean_intensity = acc.into_iter().filter_map(|(e, m)| m.mean().map(|v| (e, v))).collect();

    Some(EmotionProfile {
        cohort,
        time_point,
        proportions,
        mean_intensity,
        n_classified: members.len(),
        n_unclassified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lex(rows: &str) -> EmotionLexicon {
        EmotionLexicon::parse(rows, "test").unwrap()
    }

    fn money() -> EmotionLexicon {
        lex("money\tanticipation\t0.586\nmoney\tjoy\t0.531\nmoney\ttrust\t0.359\n")
    }

    fn assignment(emotion: Emotion, score: f64, word: &str, cohort: Cohort, tp: TimePoint) -> EmotionAssignment {
        EmotionAssignment {
            transcript_id: "t".into(),
            line_index: 0,
            cohort,
            time_point: tp,
            classification: Classification {
                emotion,
                score,
                trigger_word: word.into(),
                candidates: BTreeMap::from([(emotion, score)]),
                hits: BTreeSet::from([(emotion, word.to_string())]),
            },
        }
    }

    #[test]
    fn money_is_anticipation() {
        let c = classify_utterance(&["money"], &money()).unwrap();
        assert_eq!(c.emotion, Emotion::Anticipation);
        assert_eq!(c.score, 0.586);
        assert_eq!(c.trigger_word, "money");
        assert_eq!(c.candidates.len(), 3);
        assert_eq!(c.candidates[&Emotion::Trust], 0.359);
    }

    #[test]
    fn empty_tokens_unclassified() {
        let empty: [&str; 0] = [];
        assert!(classify_utterance(&empty, &money()).is_none());
        assert!(classify_utterance(&["nothing", "here"], &money()).is_none());
    }

    #[test]
    fn max_rule() {
        let l = lex("alpha\tfear\t0.70\nbeta\tjoy\t0.50\n");
        let c = classify_utterance(&["beta", "alpha"], &l).unwrap();
        assert_eq!(
            (c.emotion, c.score, c.trigger_word.as_str()),
            (Emotion::Fear, 0.70, "alpha")
        );
    }

    #[test]
    fn ties_follow_wheel_order_then_word() {
        let l = lex("x\ttrust\t0.5\ny\tanger\t0.5\nz\tanger\t0.5\n");
        let c = classify_utterance(&["x", "z", "y"], &l).unwrap();
        assert_eq!((c.emotion, c.trigger_word.as_str()), (Emotion::Anger, "y"));
    }

    #[test]
    fn repeated_words_do_not_stack() {
        let l = lex("sad\tsadness\t0.4\nhope\tanticipation\t0.45\n");
        let c = classify_utterance(&["sad", "sad", "sad", "hope"], &l).unwrap();
        assert_eq!(c.emotion, Emotion::Anticipation);
    }

    #[test]
    fn kind_removal_unclassifies() {
        let l = lex("kind\tjoy\t0.4\n");
        assert!(classify_utterance(&["it", "kind", "of"], &l).is_some());
        let (l, _) = l.remove_association("kind", Emotion::Joy);
        assert!(classify_utterance(&["it", "kind", "of"], &l).is_none());
    }

    #[test]
    fn distribution_examples() {
        let all_joy: Vec<_> = (0..10)
            .map(|_| assignment(Emotion::Joy, 0.5, "fun", Cohort::Peer, TimePoint::T1))
            .collect();
        let d = emotion_distribution(&all_joy).unwrap();
        assert_eq!(d[&Emotion::Joy], 1.0);
        assert_eq!(d.len(), 8);
        assert!(d.iter().filter(|(e, _)| **e != Emotion::Joy).all(|(_, &p)| p == 0.0));

        // 3 joy + 1 fear, counted by hand
        let mixed = vec![
            assignment(Emotion::Joy, 0.5, "fun", Cohort::Peer, TimePoint::T1),
            assignment(Emotion::Fear, 0.5, "worry", Cohort::Peer, TimePoint::T1),
            assignment(Emotion::Joy, 0.5, "fun", Cohort::Peer, TimePoint::T1),
            assignment(Emotion::Joy, 0.5, "home", Cohort::Peer, TimePoint::T1),
        ];
        let d = emotion_distribution(&mixed).unwrap();
        assert_eq!(d[&Emotion::Joy], 0.75);
        assert_eq!(d[&Emotion::Fear], 0.25);

        assert!(matches!(emotion_distribution(&[]), Err(Error::EmptyEmotionSubset)));
    }

    #[test]
    fn lexicon_column_sums_to_one() {
        let idd = [0.043, 0.204, 0.023, 0.043, 0.308, 0.084, 0.018, 0.277];
        let total: f64 = idd.iter().sum();
        assert!((total - 1.0).abs() < 1e-9, "{total}");
    }

    #[test]
    fn intensity_cells() {
        let single = [assignment(
            Emotion::Joy,
            0.690,
            "home",
            Cohort::IddFamily,
            TimePoint::T1,
        )];
        let table = mean_intensity(&single);
        assert_eq!(table[&(Cohort::IddFamily, TimePoint::T1)][&Emotion::Joy], 0.690);
        assert!(!table[&(Cohort::IddFamily, TimePoint::T1)].contains_key(&Emotion::Fear));

        let pair = [
            assignment(Emotion::Trust, 0.70, "school", Cohort::IddFamily, TimePoint::T2),
            assignment(Emotion::Trust, 0.78, "doctor", Cohort::IddFamily, TimePoint::T2),
        ];
        let cell = mean_intensity(&pair)[&(Cohort::IddFamily, TimePoint::T2)][&Emotion::Trust];
        assert!((cell - 0.74).abs() < 1e-12);
    }

    #[test]
    fn top_words() {
        let mut list: Vec<_> = (0..25)
            .map(|_| assignment(Emotion::Fear, 0.6, "worry", Cohort::IddFamily, TimePoint::T1))
            .collect();
        list.extend((0..10).map(|_| assignment(Emotion::Fear, 0.6, "bad", Cohort::IddFamily, TimePoint::T1)));
        list.extend((0..30).map(|_| assignment(Emotion::Joy, 0.6, "good", Cohort::IddFamily, TimePoint::T1)));
        list.extend((0..3).map(|_| assignment(Emotion::Joy, 0.6, "home", Cohort::IddFamily, TimePoint::T1)));
        let none = BTreeSet::new();

        let fear = top_emotion_words(&list, Emotion::Fear, 1, &none, WordCountMode::Trigger);
        assert_eq!(fear, vec![("worry".to_string(), 25)]);

        let block = BTreeSet::from(["good".to_string()]);
        let joy = top_emotion_words(&list, Emotion::Joy, 5, &block, WordCountMode::Trigger);
        assert_eq!(joy, vec![("home".to_string(), 3)]);

        let all = top_emotion_words(&list, Emotion::Fear, 50, &none, WordCountMode::Trigger);
        assert_eq!(all.len(), 2);
    }

    #[test]
    fn accumulator_merge_is_associative() {
        let mut a = MeanAccumulator::default();
        a.push(0.25);
        let mut b = MeanAccumulator::default();
        b.push(0.5);
        b.push(0.75);
        let c = MeanAccumulator { count: 1, sum: 1.0 };
        assert_eq!(a.merge(b).merge(c), a.merge(b.merge(c)));
        assert_eq!(a.merge(b).mean(), Some(0.5));
        assert_eq!(MeanAccumulator::default().mean(), None);
    }
}
