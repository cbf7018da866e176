use std::sync::Arc;

use super::{Action, ActionKind, CotangentGroup, CotangentLift, GroupAsGroupoid, Pair, SharedGroupoid, TangentLift};
use crate::matgroups::MatrixLieGroup;
use crate::{Error, Result};

/// Declarative description of a groupoid instance, parsed from strings such as
/// `pair(3)`, `action(so3, coadjoint)`, `cotangent-group(h3)`, `group(sl2)`,
/// `tangent-lift(pair(2))`, `cotangent-lift(group(so3))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupoidSpec {
    Pair(usize),
    Action(String, ActionKind),
    CotangentGroup(String),
    Group(String),
    TangentLift(Box<GroupoidSpec>),
    CotangentLift(Box<GroupoidSpec>),
}

fn bad(s: &str, why: &str) -> Error {
    Error::Config(format!("groupoid `{s}`: {why}"))
}

pub fn parse_spec(s: &str) -> Result<GroupoidSpec> {
    let s = s.trim();
    let open = s.find('(').ok_or_else(|| bad(s, "expected kind(arguments)"))?;
    if !s.ends_with(')') {
        return Err(bad(s, "missing closing parenthesis"));
    }
    let kind = s[..open].trim();
    let inner = s[open + 1..s.len() - 1].trim();
    match kind {
        "pair" => inner
            .parse::<usize>()
            .ok()
            .filter(|n| *n >= 1)
            .map(GroupoidSpec::Pair)
            .ok_or_else(|| bad(s, "pair needs a positive dimension")),
        "action" => {
            let (group, action) = inner.split_once(',').ok_or_else(|| bad(s, "action(group, coadjoint|linear)"))?;
            let action = match action.trim() {
                "coadjoint" => ActionKind::Coadjoint,
                "linear" => ActionKind::Linear,
                other => return Err(bad(s, &format!("unknown action `{other}`"))),
            };
            Ok(GroupoidSpec::Action(group.trim().to_string(), action))
        }
        "cotangent-group" => Ok(GroupoidSpec::CotangentGroup(inner.to_string())),
        "group" => Ok(GroupoidSpec::Group(inner.to_string())),
        "tangent-lift" => Ok(GroupoidSpec::TangentLift(Box::new(parse_spec(inner)?))),
        "cotangent-lift" => Ok(GroupoidSpec::CotangentLift(Box::new(parse_spec(inner)?))),
        other => Err(Error::Unknown {
            kind: "groupoid kind",
            name: other.to_string(),
        }),
    }
}

pub fn build(spec: &GroupoidSpec) -> Result<SharedGroupoid> {
    let group = |name: &str| MatrixLieGroup::by_name(name).map(Arc::new);
    Ok(match spec {
        GroupoidSpec::Pair(n) => Arc::new(Pair::new(*n)),
        GroupoidSpec::Action(g, kind) => Arc::new(Action::new(group(g)?, *kind)),
        GroupoidSpec::CotangentGroup(g) => Arc::new(CotangentGroup::new(group(g)?)),
        GroupoidSpec::Group(g) => Arc::new(GroupAsGroupoid::new(group(g)?)),
        GroupoidSpec::TangentLift(inner) => Arc::new(TangentLift::new(build(inner)?)),
        GroupoidSpec::CotangentLift(inner) => Arc::new(CotangentLift::new(build(inner)?)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_nested_specs() {
        assert_eq!(
            parse_spec("tangent-lift(action(so3, coadjoint))").unwrap(),
            GroupoidSpec::TangentLift(Box::new(GroupoidSpec::Action("so3".into(), ActionKind::Coadjoint)))
        );
        assert!(parse_spec("pair(0)").is_err());
        assert!(parse_spec("frame(3)").is_err());
        assert!(build(&parse_spec("group(gl9)").unwrap()).is_err());
        assert_eq!(build(&parse_spec("cotangent-lift(group(h3))").unwrap()).unwrap().arrow_dim(), 6);
    }
}
