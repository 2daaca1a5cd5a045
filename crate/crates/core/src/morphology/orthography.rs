//! English spelling adjustments for suffixation.

use std::fmt;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suffix {
    S,
    Ed,
    Ing,
    Er,
    Est,
    Y,
    Ful,
    Ly,
    Ness,
}

impl Suffix {
    pub const ALL: [Suffix; 9] = [
        Suffix::S,
        Suffix::Ed,
        Suffix::Ing,
        Suffix::Er,
        Suffix::Est,
        Suffix::Y,
        Suffix::Ful,
        Suffix::Ly,
        Suffix::Ness,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Suffix::S => "s",
            Suffix::Ed => "ed",
            Suffix::Ing => "ing",
            Suffix::Er => "er",
            Suffix::Est => "est",
            Suffix::Y => "y",
            Suffix::Ful => "ful",
            Suffix::Ly => "ly",
            Suffix::Ness => "ness",
        }
    }

    fn starts_with_vowel(self) -> bool {
        matches!(
            self,
            Suffix::Ed | Suffix::Ing | Suffix::Er | Suffix::Est | Suffix::Y
        )
    }
}

impl fmt::Display for Suffix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Stems whose final consonant doubles before a vowel suffix. Stress decides
/// this in English (stop/stopped but visit/visited), so it is a list.
pub const DOUBLING_STEMS: &[&str] = &[
    "bag", "beg", "big", "bit", "clap", "control", "cut", "dad", "dig", "dog", "drag", "drop",
    "drum", "fat", "fit", "flat", "fog", "forget", "fun", "get", "god", "grab", "gun", "hit",
    "hop", "hot", "hug", "kid", "let", "mud", "nod", "pat", "pen", "plan", "pop", "pot", "put",
    "red", "rob", "rub", "run", "sad", "set", "ship", "shop", "shut", "sit", "skin", "slip",
    "spin", "spot", "star", "step", "stir", "stop", "sun", "swim", "thin", "top", "trip", "wet",
    "win", "wrap", "begin",
];

fn is_vowel(c: u8) -> bool {
    matches!(c, b'a' | b'e' | b'i' | b'o' | b'u')
}

fn ends_consonant_y(stem: &str) -> bool {
    let b = stem.as_bytes();
    b.len() >= 2 && b[b.len() - 1] == b'y' && !is_vowel(b[b.len() - 2])
}

fn ends_consonant_o(stem: &str) -> bool {
    let b = stem.as_bytes();
    b.len() >= 2 && b[b.len() - 1] == b'o' && !is_vowel(b[b.len() - 2])
}

fn doubles(stem: &str) -> bool {
    DOUBLING_STEMS.contains(&stem)
}

fn doubled(stem: &str, suffix: &str) -> String {
    let last = stem.chars().last().expect("non-empty stem");
    format!("{stem}{last}{suffix}")
}

fn without_last(stem: &str, n: usize) -> &str {
    let cut = stem
        .char_indices()
        .rev()
        .nth(n - 1)
        .map_or(0, |(i, _)| i);
    &stem[..cut]
}

/// Attaches `suffix` to `stem` with English spelling adjustments: e-drop
/// before vowel suffixes, consonant doubling for [`DOUBLING_STEMS`], y→i
/// after a consonant, and -es after sibilants.
pub fn apply_suffix(stem: &str, suffix: Suffix) -> String {
    if stem.is_empty() {
        return suffix.as_str().to_string();
    }
    let s = suffix.as_str();
    if suffix.starts_with_vowel() && doubles(stem) {
        return doubled(stem, s);
    }
    let ends_e = stem.ends_with('e');
    match suffix {
        Suffix::S => {
            if ["s", "x", "z", "ch", "sh"].iter().any(|e| stem.ends_with(e))
                || ends_consonant_o(stem)
            {
                format!("{stem}es")
            } else if ends_consonant_y(stem) {
                format!("{}ies", without_last(stem, 1))
            } else {
                format!("{stem}s")
            }
        }
        Suffix::Ed => {
            if ends_e {
                format!("{stem}d")
            } else if ends_consonant_y(stem) {
                format!("{}ied", without_last(stem, 1))
            } else {
                format!("{stem}ed")
            }
        }
        Suffix::Ing => {
            if stem.ends_with("ie") {
                format!("{}ying", without_last(stem, 2))
            } else if ends_e
                && stem.len() > 2
                && !["ee", "oe", "ye"].iter().any(|e| stem.ends_with(e))
            {
                format!("{}ing", without_last(stem, 1))
            } else {
                format!("{stem}ing")
            }
        }
        Suffix::Er | Suffix::Est => {
            if ends_e {
                format!("{stem}{}", &s[1..])
            } else if ends_consonant_y(stem) {
                format!("{}i{s}", without_last(stem, 1))
            } else {
                format!("{stem}{s}")
            }
        }
        Suffix::Y => {
            if ends_e && !stem.ends_with("ee") {
                format!("{}y", without_last(stem, 1))
            } else {
                format!("{stem}y")
            }
        }
        Suffix::Ful => {
            if ends_consonant_y(stem) {
                format!("{}iful", without_last(stem, 1))
            } else {
                format!("{stem}ful")
            }
        }
        Suffix::Ly => {
            let b = stem.as_bytes();
            if ends_consonant_y(stem) {
                format!("{}ily", without_last(stem, 1))
            } else if stem.ends_with("le") && b.len() > 2 && !is_vowel(b[b.len() - 3]) {
                format!("{}y", without_last(stem, 1))
            } else if stem.ends_with("ue") {
                format!("{}ly", without_last(stem, 1))
            } else if stem.ends_with("ll") {
                format!("{stem}y")
            } else if stem.ends_with("ic") {
                format!("{stem}ally")
            } else {
                format!("{stem}ly")
            }
        }
        Suffix::Ness => {
            if ends_consonant_y(stem) {
                format!("{}iness", without_last(stem, 1))
            } else {
                format!("{stem}ness")
            }
        }
    }
}
