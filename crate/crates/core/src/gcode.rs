//! Minimal RepRap-dialect G-code: the eight words the motion planner emits
//! and the simulated controller accepts.
//!
//! Wire format is UTF-8 lines terminated by `\n`. Parameters serialize in
//! the fixed order X, Y, Z, A, F, P, S with two decimal places, e.g.
//! `G1 X120.00 Y80.00 F3000.00`.

/// Supported command words.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Word {
    G0,
    G1,
    G28,
    G90,
    G91,
    M400,
    M114,
    M42,
}

impl Word {
    pub fn as_str(&self) -> &'static str {
        match self {
            Word::G0 => "G0",
            Word::G1 => "G1",
            Word::G28 => "G28",
            Word::G90 => "G90",
            Word::G91 => "G91",
            Word::M400 => "M400",
            Word::M114 => "M114",
            Word::M42 => "M42",
        }
    }

    fn from_token(token: &str) -> Option<Word> {
        match token {
            "G0" => Some(Word::G0),
            "G1" => Some(Word::G1),
            "G28" => Some(Word::G28),
            "G90" => Some(Word::G90),
            "G91" => Some(Word::G91),
            "M400" => Some(Word::M400),
            "M114" => Some(Word::M114),
            "M42" => Some(Word::M42),
            _ => None,
        }
    }

    /// Motion words are rejected before homing.
    pub fn is_motion(&self) -> bool {
        matches!(self, Word::G0 | Word::G1)
    }
}

/// Parameter letters in canonical serialization order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Param {
    X,
    Y,
    Z,
    A,
    F,
    P,
    S,
}

pub const PARAM_ORDER: [Param; 7] = [
    Param::X,
    Param::Y,
    Param::Z,
    Param::A,
    Param::F,
    Param::P,
    Param::S,
];

impl Param {
    pub fn letter(&self) -> char {
        match self {
            Param::X => 'X',
            Param::Y => 'Y',
            Param::Z => 'Z',
            Param::A => 'A',
            Param::F => 'F',
            Param::P => 'P',
            Param::S => 'S',
        }
    }

    fn from_letter(c: char) -> Option<Param> {
        match c {
            'X' => Some(Param::X),
            'Y' => Some(Param::Y),
            'Z' => Some(Param::Z),
            'A' => Some(Param::A),
            'F' => Some(Param::F),
            'P' => Some(Param::P),
            'S' => Some(Param::S),
            _ => None,
        }
    }

    fn index(&self) -> usize {
        *self as usize
    }
}

/// One G-code command: a word plus letter-to-number parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GCodeCommand {
    pub word: Word,
    params: [Option<f64>; 7],
}

/// Why a line failed to parse; the controller maps these to its two error
/// replies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseIssue {
    /// Well-formed word outside the supported set.
    Unsupported(String),
    /// Anything else: bad token shape, non-finite or unparseable number,
    /// duplicate parameter.
    Malformed,
}

impl GCodeCommand {
    pub fn new(word: Word) -> Self {
        GCodeCommand {
            word,
            params: [None; 7],
        }
    }

    pub fn with(mut self, param: Param, value: f64) -> Self {
        debug_assert!(value.is_finite());
        self.params[param.index()] = Some(value);
        self
    }

    pub fn get(&self, param: Param) -> Option<f64> {
        self.params[param.index()]
    }

    /// Present parameters in canonical order.
    pub fn params(&self) -> impl Iterator<Item = (Param, f64)> + '_ {
        PARAM_ORDER
            .iter()
            .filter_map(|p| self.params[p.index()].map(|v| (*p, v)))
    }

    /// One line, no terminator, numbers fixed to two decimals.
    pub fn serialize(&self) -> String {
        let mut out = self.word.as_str().to_string();
        for (p, v) in self.params() {
            // canonicalize -0.0 so formatting never emits a minus sign
            let v = if v == 0.0 { 0.0 } else { v };
            out.push(' ');
            out.push(p.letter());
            out.push_str(&format!("{v:.2}"));
        }
        out
    }

    /// Parses one line (no terminator). The grammar is strict: a known word
    /// token, then `letter`+`finite number` parameter tokens without
    /// repeats.
    pub fn parse(line: &str) -> Result<GCodeCommand, ParseIssue> {
        let mut tokens = line.split_whitespace();
        let word_token = tokens.next().ok_or(ParseIssue::Malformed)?;
        if !word_token
            .chars()
            .next()
            .is_some_and(|c| c.is_ascii_uppercase())
            || !word_token.chars().skip(1).all(|c| c.is_ascii_digit())
            || word_token.len() < 2
        {
            return Err(ParseIssue::Malformed);
        }
        let word = Word::from_token(word_token)
            .ok_or_else(|| ParseIssue::Unsupported(word_token.to_string()))?;
        let mut cmd = GCodeCommand::new(word);
        for token in tokens {
            let mut chars = token.chars();
            let letter = chars.next().ok_or(ParseIssue::Malformed)?;
            let param = Param::from_letter(letter).ok_or(ParseIssue::Malformed)?;
            let value: f64 = chars
                .as_str()
                .parse()
                .map_err(|_| ParseIssue::Malformed)?;
            if !value.is_finite() {
                return Err(ParseIssue::Malformed);
            }
            if cmd.params[param.index()].is_some() {
                return Err(ParseIssue::Malformed);
            }
            cmd.params[param.index()] = Some(value);
        }
        Ok(cmd)
    }
}
