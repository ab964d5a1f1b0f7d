//! The game itself: positions, strategy interfaces, playouts and transcripts.
//!
//! A playout runs: cops place, the robber places seeing them, then rounds of
//! (all cops move, capture check, robber moves, capture check). A capture is
//! any cop sharing the robber's vertex, whichever side moved onto it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Cops,
    Robber,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Position {
    /// Cop `i` stands on `cops[i]`; several cops may share a vertex.
    pub cops: Vec<Vertex>,
    pub robber: Option<Vertex>,
    pub to_move: Side,
    pub round: usize,
    /// The robber's last step `(from, to)`, if he moved along an edge.
    pub robber_last_edge: Option<(Vertex, Vertex)>,
}

impl Position {
    pub fn capturing_cop(&self) -> Option<usize> {
        let r = self.robber?;
        self.cops.iter().position(|&c| c == r)
    }

    pub fn is_capture(&self) -> bool {
        self.capturing_cop().is_some()
    }
}

/// Options for each mover: its closed neighbourhood. Cops to move get one
/// entry per cop; the robber gets a single entry (every vertex before
/// placement).
pub fn legal_moves(g: &Graph, pos: &Position) -> Vec<Vec<Vertex>> {
    match pos.to_move {
        Side::Cops => pos.cops.iter().map(|&c| g.closed_neighbors(c)).collect(),
        Side::Robber => match pos.robber {
            Some(r) => vec![g.closed_neighbors(r)],
            None => vec![(0..g.n()).collect()],
        },
    }
}

pub trait CopStrategy {
    fn name(&self) -> String;

    /// Initial cop vertices. `robber` is known only under
    /// [`Rules::robber_places_first`].
    fn place(&mut self, g: &Graph, robber: Option<Vertex>) -> Result<Vec<Vertex>>;

    /// New vertex for every cop, in cop order.
    fn step(&mut self, g: &Graph, pos: &Position) -> Vec<Vertex>;

    fn take_notes(&mut self) -> Vec<String> {
        Vec::new()
    }
}

pub trait RobberStrategy {
    fn name(&self) -> String;

    /// `cops` is empty under [`Rules::robber_places_first`].
    fn place(&mut self, g: &Graph, cops: &[Vertex]) -> Vertex;

    fn step(&mut self, g: &Graph, pos: &Position) -> Vertex;

    fn take_notes(&mut self) -> Vec<String> {
        Vec::new()
    }
}

impl<T: CopStrategy + ?Sized> CopStrategy for Box<T> {
    fn name(&self) -> String {
        (**self).name()
    }
    fn place(&mut self, g: &Graph, robber: Option<Vertex>) -> Result<Vec<Vertex>> {
        (**self).place(g, robber)
    }
    fn step(&mut self, g: &Graph, pos: &Position) -> Vec<Vertex> {
        (**self).step(g, pos)
    }
    fn take_notes(&mut self) -> Vec<String> {
        (**self).take_notes()
    }
}

impl<T: RobberStrategy + ?Sized> RobberStrategy for Box<T> {
    fn name(&self) -> String {
        (**self).name()
    }
    fn place(&mut self, g: &Graph, cops: &[Vertex]) -> Vertex {
        (**self).place(g, cops)
    }
    fn step(&mut self, g: &Graph, pos: &Position) -> Vertex {
        (**self).step(g, pos)
    }
    fn take_notes(&mut self) -> Vec<String> {
        (**self).take_notes()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rules {
    pub max_rounds: usize,
    /// Cops may not stay put (the modified game used for the robber's
    /// potential argument).
    pub cops_must_move: bool,
    /// The robber places before the cops and they see his vertex.
    pub robber_places_first: bool,
}

impl Rules {
    pub fn with_max_rounds(max_rounds: usize) -> Self {
        Self {
            max_rounds,
            cops_must_move: false,
            robber_places_first: false,
        }
    }

    /// Default cutoff `n³`.
    pub fn for_graph(g: &Graph) -> Self {
        Self::with_max_rounds(g.n().saturating_pow(3).max(1))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Placements {
    pub cops: Vec<Vertex>,
    pub robber: Option<Vertex>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Outcome {
    /// `round` 0 means capture at placement.
    Caught {
        round: usize,
        cop: usize,
    },
    Evaded {
        cutoff: usize,
    },
    Aborted {
        round: usize,
        agent: String,
        reason: String,
    },
}

impl Outcome {
    pub fn caught(&self) -> bool {
        matches!(self, Outcome::Caught { .. })
    }

    pub fn capture_round(&self) -> Option<usize> {
        match self {
            Outcome::Caught { round, .. } => Some(*round),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Transcript {
    pub graph_hash: String,
    pub placements: Placements,
    /// `moves[t]` holds the vertices after round `t + 1`: every cop in
    /// order, then the robber (absent if the cops captured first).
    pub moves: Vec<Vec<Vertex>>,
    pub outcome: Outcome,
    pub seed: Option<u64>,
    pub rule_flags: Rules,
    pub cop_strategy: String,
    pub robber_strategy: String,
    #[serde(default)]
    pub notes: Vec<String>,
}

impl Transcript {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn cop_count(&self) -> usize {
        self.placements.cops.len()
    }
}

fn check_cop_move(
    g: &Graph,
    rules: &Rules,
    from: &[Vertex],
    to: &[Vertex],
) -> std::result::Result<(), String> {
    if to.len() != from.len() {
        return Err(format!("{} cop moves for {} cops", to.len(), from.len()));
    }
    for (i, (&a, &b)) in from.iter().zip(to).enumerate() {
        if b >= g.n() || !g.adjacent_or_equal(a, b) {
            return Err(format!("cop {i} cannot move {a} -> {b}"));
        }
        if rules.cops_must_move && a == b && g.degree(a) > 0 {
            return Err(format!("cop {i} stayed at {a} but must move"));
        }
    }
    Ok(())
}

/// Plays one game. Illegal strategy output ends the game with
/// [`Outcome::Aborted`].
pub fn play<C, R>(g: &Graph, cops: &mut C, robber: &mut R, rules: &Rules) -> Transcript
where
    C: CopStrategy + ?Sized,
    R: RobberStrategy + ?Sized,
{
    let mut transcript = Transcript {
        graph_hash: g.hash_hex(),
        placements: Placements {
            cops: Vec::new(),
            robber: None,
        },
        moves: Vec::new(),
        outcome: Outcome::Evaded {
            cutoff: rules.max_rounds,
        },
        seed: None,
        rule_flags: *rules,
        cop_strategy: cops.name(),
        robber_strategy: robber.name(),
        notes: Vec::new(),
    };
    let abort = |round: usize, agent: &str, reason: String| Outcome::Aborted {
        round,
        agent: agent.to_string(),
        reason,
    };

    let (cop_start, robber_start) = if rules.robber_places_first {
        let r = robber.place(g, &[]);
        transcript.placements.robber = Some(r);
        if r >= g.n() {
            transcript.outcome = abort(0, "robber", format!("placement {r} is not a vertex"));
            return transcript;
        }
        match cops.place(g, Some(r)) {
            Ok(c) => (c, r),
            Err(e) => {
                transcript.outcome = abort(0, "cops", e.to_string());
                return transcript;
            }
        }
    } else {
        let c = match cops.place(g, None) {
            Ok(c) => c,
            Err(e) => {
                transcript.outcome = abort(0, "cops", e.to_string());
                return transcript;
            }
        };
        if let Some(&bad) = c.iter().find(|&&v| v >= g.n()) {
            transcript.placements.cops = c;
            transcript.outcome = abort(0, "cops", format!("placement {bad} is not a vertex"));
            return transcript;
        }
        let r = robber.place(g, &c);
        (c, r)
    };
    transcript.placements.cops = cop_start.clone();
    transcript.placements.robber = Some(robber_start);
    if let Some(&bad) = cop_start.iter().find(|&&v| v >= g.n()) {
        transcript.outcome = abort(0, "cops", format!("placement {bad} is not a vertex"));
        return transcript;
    }
    if robber_start >= g.n() {
        transcript.outcome = abort(
            0,
            "robber",
            format!("placement {robber_start} is not a vertex"),
        );
        return transcript;
    }

    let mut pos = Position {
        cops: cop_start,
        robber: Some(robber_start),
        to_move: Side::Cops,
        round: 0,
        robber_last_edge: None,
    };
    if let Some(cop) = pos.capturing_cop() {
        transcript.outcome = Outcome::Caught { round: 0, cop };
    } else {
        for round in 1..=rules.max_rounds {
            pos.round = round;
            pos.to_move = Side::Cops;
            let next = cops.step(g, &pos);
            if let Err(reason) = check_cop_move(g, rules, &pos.cops, &next) {
                transcript.outcome = abort(round, "cops", reason);
                break;
            }
            pos.cops = next;
            if let Some(cop) = pos.capturing_cop() {
                transcript.moves.push(pos.cops.clone());
                transcript.outcome = Outcome::Caught { round, cop };
                break;
            }
            pos.to_move = Side::Robber;
            let r = pos.robber.expect("placed");
            let next = robber.step(g, &pos);
            if next >= g.n() || !g.adjacent_or_equal(r, next) {
                transcript.outcome =
                    abort(round, "robber", format!("robber cannot move {r} -> {next}"));
                break;
            }
            pos.robber = Some(next);
            pos.robber_last_edge = (next != r).then_some((r, next));
            let mut row = pos.cops.clone();
            row.push(next);
            transcript.moves.push(row);
            if let Some(cop) = pos.capturing_cop() {
                transcript.outcome = Outcome::Caught { round, cop };
                break;
            }
        }
    }
    transcript.notes.extend(cops.take_notes());
    transcript.notes.extend(robber.take_notes());
    transcript
}

/// Cops replaying recorded placements and moves.
pub struct ScriptedCops {
    placement: Vec<Vertex>,
    moves: Vec<Vec<Vertex>>,
    next: usize,
}

impl ScriptedCops {
    pub fn new(placement: Vec<Vertex>, moves: Vec<Vec<Vertex>>) -> Self {
        Self {
            placement,
            moves,
            next: 0,
        }
    }
}

impl CopStrategy for ScriptedCops {
    fn name(&self) -> String {
        "scripted".into()
    }

    fn place(&mut self, _g: &Graph, _robber: Option<Vertex>) -> Result<Vec<Vertex>> {
        Ok(self.placement.clone())
    }

    /// Holds once the script runs out.
    fn step(&mut self, _g: &Graph, pos: &Position) -> Vec<Vertex> {
        let out = self
            .moves
            .get(self.next)
            .cloned()
            .unwrap_or_else(|| pos.cops.clone());
        self.next += 1;
        out
    }
}

/// A robber following a fixed vertex sequence regardless of the cops.
pub struct ScriptedRobber {
    placement: Vertex,
    moves: Vec<Vertex>,
    next: usize,
}

impl ScriptedRobber {
    pub fn new(placement: Vertex, moves: Vec<Vertex>) -> Self {
        Self {
            placement,
            moves,
            next: 0,
        }
    }
}

impl RobberStrategy for ScriptedRobber {
    fn name(&self) -> String {
        "scripted".into()
    }

    fn place(&mut self, _g: &Graph, _cops: &[Vertex]) -> Vertex {
        self.placement
    }

    fn step(&mut self, _g: &Graph, pos: &Position) -> Vertex {
        let out = self
            .moves
            .get(self.next)
            .copied()
            .unwrap_or_else(|| pos.robber.expect("placed"));
        self.next += 1;
        out
    }
}

/// Re-simulates a transcript's recorded moves and returns the outcome the
/// engine assigns to them.
pub fn replay(g: &Graph, t: &Transcript) -> Result<Outcome> {
    if g.hash_hex() != t.graph_hash {
        return Err(Error::InvalidParameter(
            "transcript belongs to a different graph".into(),
        ));
    }
    let k = t.cop_count();
    let cop_moves: Vec<Vec<Vertex>> = t
        .moves
        .iter()
        .map(|row| row[..k.min(row.len())].to_vec())
        .collect();
    let robber_moves: Vec<Vertex> = t
        .moves
        .iter()
        .filter_map(|row| row.get(k).copied())
        .collect();
    let mut cops = ScriptedCops::new(t.placements.cops.clone(), cop_moves);
    let robber_start = t
        .placements
        .robber
        .ok_or_else(|| Error::InvalidParameter("transcript has no robber placement".into()))?;
    let mut robber = ScriptedRobber::new(robber_start, robber_moves);
    let mut rules = t.rule_flags;
    if let Outcome::Caught { round, .. } | Outcome::Aborted { round, .. } = t.outcome {
        rules.max_rounds = rules.max_rounds.min(round.max(1));
    }
    Ok(play(g, &mut cops, &mut robber, &rules).outcome)
}

/// Turns a strategy for `k` cops that may stay into one for `2k` cops that
/// must all move every round.
///
/// Each base cop becomes a pair: a leader on the base cop's vertex and a
/// follower on a neighbour. When the base cop moves, the leader moves with
/// it and the follower steps onto the leader's old vertex; when the base cop
/// stays, the two swap vertices and swap roles. Leaders therefore always sit
/// exactly where the base strategy puts its cops. Cop `2i` and `2i + 1` form
/// pair `i`.
pub struct PairedCops<S> {
    base: S,
    leader_slot: Vec<usize>,
}

impl<S: CopStrategy> PairedCops<S> {
    pub fn new(base: S) -> Self {
        Self {
            base,
            leader_slot: Vec::new(),
        }
    }

    pub fn leaders(&self, cops: &[Vertex]) -> Vec<Vertex> {
        self.leader_slot
            .iter()
            .enumerate()
            .map(|(i, &s)| cops[2 * i + s])
            .collect()
    }
}

impl<S: CopStrategy> CopStrategy for PairedCops<S> {
    fn name(&self) -> String {
        format!("paired({})", self.base.name())
    }

    fn place(&mut self, g: &Graph, robber: Option<Vertex>) -> Result<Vec<Vertex>> {
        let base = self.base.place(g, robber)?;
        let mut out = Vec::with_capacity(2 * base.len());
        for &v in &base {
            g.check_vertex(v)?;
            let &buddy = g.neighbors(v).first().ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "vertex {v} is isolated; a pair cannot keep moving"
                ))
            })?;
            out.push(v);
            out.push(buddy);
        }
        self.leader_slot = vec![0; base.len()];
        Ok(out)
    }

    fn step(&mut self, g: &Graph, pos: &Position) -> Vec<Vertex> {
        let view = Position {
            cops: self.leaders(&pos.cops),
            ..pos.clone()
        };
        let targets = self.base.step(g, &view);
        let mut out = pos.cops.clone();
        for (i, &target) in targets.iter().enumerate().take(self.leader_slot.len()) {
            let lead = 2 * i + self.leader_slot[i];
            let follow = 2 * i + 1 - self.leader_slot[i];
            let (l, f) = (pos.cops[lead], pos.cops[follow]);
            if target != l {
                out[lead] = target;
                out[follow] = l;
            } else {
                out[lead] = f;
                out[follow] = l;
                self.leader_slot[i] = 1 - self.leader_slot[i];
            }
        }
        out
    }

    fn take_notes(&mut self) -> Vec<String> {
        self.base.take_notes()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::fixture;

    struct Stay(Vec<Vertex>);

    impl CopStrategy for Stay {
        fn name(&self) -> String {
            "stay".into()
        }
        fn place(&mut self, _g: &Graph, _r: Option<Vertex>) -> Result<Vec<Vertex>> {
            Ok(self.0.clone())
        }
        fn step(&mut self, _g: &Graph, pos: &Position) -> Vec<Vertex> {
            pos.cops.clone()
        }
    }

    struct Teleport;

    impl RobberStrategy for Teleport {
        fn name(&self) -> String {
            "teleport".into()
        }
        fn place(&mut self, _g: &Graph, _c: &[Vertex]) -> Vertex {
            0
        }
        fn step(&mut self, g: &Graph, pos: &Position) -> Vertex {
            (pos.robber.unwrap() + g.n() / 2) % g.n()
        }
    }

    #[test]
    fn move_options() {
        let pet = fixture("petersen").unwrap();
        let pos = Position {
            cops: vec![0],
            robber: Some(5),
            to_move: Side::Cops,
            round: 1,
            robber_last_edge: None,
        };
        assert_eq!(legal_moves(&pet, &pos)[0].len(), 4);
        let c5 = fixture("cycle:5").unwrap();
        let pos = Position {
            to_move: Side::Robber,
            ..pos
        };
        let pos = Position {
            robber: Some(2),
            ..pos
        };
        assert_eq!(legal_moves(&c5, &pos), vec![vec![1, 2, 3]]);
        let k1 = Graph::from_edges(1, []).unwrap();
        let pos = Position {
            cops: vec![],
            robber: Some(0),
            to_move: Side::Robber,
            round: 0,
            robber_last_edge: None,
        };
        assert_eq!(legal_moves(&k1, &pos), vec![vec![0]]);
    }

    #[test]
    fn stepping_onto_a_cop_is_capture() {
        let p3 = fixture("path:3").unwrap();
        let mut cops = Stay(vec![0]);
        let mut robber = ScriptedRobber::new(2, vec![1, 0]);
        let t = play(&p3, &mut cops, &mut robber, &Rules::with_max_rounds(10));
        assert_eq!(t.outcome, Outcome::Caught { round: 2, cop: 0 });
        assert_eq!(replay(&p3, &t).unwrap(), t.outcome);
    }

    #[test]
    fn illegal_moves_abort() {
        let c6 = fixture("cycle:6").unwrap();
        let mut cops = Stay(vec![1]);
        let t = play(&c6, &mut cops, &mut Teleport, &Rules::with_max_rounds(5));
        assert!(
            matches!(t.outcome, Outcome::Aborted { round: 1, ref agent, .. } if agent == "robber")
        );

        let mut cops = Stay(vec![1]);
        let rules = Rules {
            cops_must_move: true,
            ..Rules::with_max_rounds(5)
        };
        let t = play(&c6, &mut cops, &mut ScriptedRobber::new(4, vec![]), &rules);
        assert!(matches!(t.outcome, Outcome::Aborted { ref agent, .. } if agent == "cops"));
    }

    #[test]
    fn placement_capture_and_evasion() {
        let c6 = fixture("cycle:6").unwrap();
        let t = play(
            &c6,
            &mut Stay(vec![3]),
            &mut ScriptedRobber::new(3, vec![]),
            &Rules::with_max_rounds(5),
        );
        assert_eq!(t.outcome, Outcome::Caught { round: 0, cop: 0 });
        let t = play(
            &c6,
            &mut Stay(vec![3]),
            &mut ScriptedRobber::new(0, vec![]),
            &Rules::with_max_rounds(5),
        );
        assert_eq!(t.outcome, Outcome::Evaded { cutoff: 5 });
        assert_eq!(t.moves.len(), 5);
        let back = Transcript::from_json(&t.to_json().unwrap()).unwrap();
        assert_eq!(back, t);
        assert_eq!(replay(&c6, &back).unwrap(), t.outcome);
    }

    #[test]
    fn paired_cops_always_move_and_track_the_base() {
        let c6 = fixture("cycle:6").unwrap();
        let rules = Rules {
            cops_must_move: true,
            ..Rules::with_max_rounds(6)
        };
        let mut paired = PairedCops::new(Stay(vec![0, 3]));
        let t = play(
            &c6,
            &mut paired,
            &mut ScriptedRobber::new(1, vec![1, 1, 1]),
            &rules,
        );
        // The follower of the cop on 0 starts on 1, where the robber stands.
        assert_eq!(t.outcome, Outcome::Caught { round: 0, cop: 1 });

        let mut paired = PairedCops::new(Stay(vec![0]));
        let t = play(
            &c6,
            &mut paired,
            &mut ScriptedRobber::new(3, vec![]),
            &rules,
        );
        assert_eq!(t.outcome, Outcome::Evaded { cutoff: 6 });
        for row in &t.moves {
            assert!(
                row[0] == 0 || row[1] == 0,
                "a cop of the pair sits on the base vertex"
            );
        }
    }
}
