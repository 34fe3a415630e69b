//! The bundled Android case study: activity lifecycle, ten resource
//! usage protocols, and twenty-five acquire/release policies with their
//! generated enforcers.
//!
//! The protocols are reconstructions: each API's published policy list
//! names the acquire/release method pairs, and the model beside each
//! case file documents how those pairs interact. Two shapes cover the
//! ten APIs: full-release protocols, where one release action (e.g.
//! `release`) also disables the other pairs' release actions, and
//! independent-toggle protocols, where every pair flips its own bit.
//! The former produce enforcer interference, the latter do not.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::compose::{build_network, ComposeError, Network, TargetMap};
use crate::dsl::{parse_document, DslError, LtsDecl};
use crate::edit2io::CompletionPolicy;
use crate::mcheck::{verify, CheckError, VerificationReport};
use crate::model::{Action, CtlFormula, EditAutomaton, EditTransition, Policy, Trace};

const LIFECYCLE: &str = include_str!("../data/catalog/lifecycle.enf");

/// (api, package, source, expected, templates)
const CASES: [(&str, &str, &str, Verdict, &[(&str, &str, &str)]); 10] = [
    (
        "BluetoothAdapter",
        "android.bluetooth",
        include_str!("../data/catalog/bluetoothadapter.enf"),
        Verdict::No,
        &[
            ("enable", "disable", "onDestroy"),
            ("startDiscovery", "cancelDiscovery", "onDestroy"),
            ("getProfielProxy", "closeProfileProxy", "onDestroy"),
        ],
    ),
    (
        "Camera",
        "android.hardware",
        include_str!("../data/catalog/camera.enf"),
        Verdict::Yes,
        &[
            ("lock", "unlock", "onPause"),
            ("open", "release", "onPause"),
            ("startFaceDetection", "stopFaceDetection", "onPause"),
            ("startPreview", "stopPreview", "onPause"),
        ],
    ),
    (
        "AudioManager",
        "android.media",
        include_str!("../data/catalog/audiomanager.enf"),
        Verdict::No,
        &[
            ("requestAudioFocus", "abandonAudioFocus", "onPause"),
            ("startBluetoothSco", "stopBluetoothSco", "onPause"),
            ("loadSoundEffects", "unloadSoundEffects", "onPause"),
        ],
    ),
    (
        "MediaCodec",
        "android.media",
        include_str!("../data/catalog/mediacodec.enf"),
        Verdict::Yes,
        &[
            ("createDecoderByType", "release", "onPause"),
            ("start", "stop", "onPause"),
        ],
    ),
    (
        "MediaPlayer",
        "android.media",
        include_str!("../data/catalog/mediaplayer.enf"),
        Verdict::Yes,
        &[
            ("init", "release", "onStop"),
            ("create", "release", "onStop"),
            ("start", "stop", "onStop"),
        ],
    ),
    (
        "MediaRecorder",
        "android.media",
        include_str!("../data/catalog/mediarecorder.enf"),
        Verdict::Yes,
        &[
            ("init", "release", "onStop"),
            ("start", "stop", "onStop"),
        ],
    ),
    (
        "NfcAdapter",
        "android.nfc",
        include_str!("../data/catalog/nfcadapter.enf"),
        Verdict::No,
        &[
            ("enableForegroundDispatch", "disableForegroundDispatch", "onPause"),
            ("enableForegroundNdefPush", "disableForegroundNdefPush", "onPause"),
        ],
    ),
    (
        "RemoteCallbackList",
        "android.os",
        include_str!("../data/catalog/remotecallbacklist.enf"),
        Verdict::No,
        &[
            ("beginBroadcast", "finishBroadcast", "onDestroy"),
            ("register", "unregister", "onDestroy"),
        ],
    ),
    (
        "Surface",
        "android.view",
        include_str!("../data/catalog/surface.enf"),
        Verdict::Yes,
        &[
            ("init", "release", "onDestroy"),
            ("lockCanvas", "unlockCanvasAndPost", "onDestroy"),
        ],
    ),
    (
        "SurfaceHolder",
        "android.view",
        include_str!("../data/catalog/surfaceholder.enf"),
        Verdict::No,
        &[
            ("addCallback", "removeCallback", "onDestroy"),
            ("LockCanvas", "unlockCanvasAndPost", "onDestroy"),
        ],
    ),
];

/// Interference verdict of a case.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Yes => "Yes",
            Verdict::No => "No",
        })
    }
}

/// One acquire/release policy of a case, e.g. `create/release: onStop`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolicyTemplate {
    pub acquire: Action,
    pub release: Action,
    pub callback: Action,
}

impl std::fmt::Display for PolicyTemplate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}: {}", self.acquire, self.release, self.callback)
    }
}

/// One API row of the case study.
#[derive(Debug, Clone)]
pub struct CaseStudy {
    pub api: String,
    pub package: String,
    pub protocol: LtsDecl,
    pub templates: Vec<PolicyTemplate>,
    pub expected: Verdict,
}

#[derive(Debug, Clone, Error)]
pub enum CatalogError {
    #[error(transparent)]
    Compose(#[from] ComposeError),
    #[error(transparent)]
    Check(#[from] CheckError),
    #[error("bundled model: {0}")]
    Bundled(#[from] DslError),
}

fn bundled_lts(source: &str, name: &str) -> LtsDecl {
    parse_document(source)
        .unwrap_or_else(|e| panic!("bundled model `{name}` failed to parse: {e}"))
        .lts(name)
        .unwrap_or_else(|| panic!("bundled model `{name}` missing its lts"))
        .clone()
}

/// The activity lifecycle model shared by every case.
pub fn lifecycle() -> LtsDecl {
    bundled_lts(LIFECYCLE, "app")
}

/// The ten bundled cases with their twenty-five policy templates.
pub fn list_cases() -> Vec<CaseStudy> {
    CASES
        .iter()
        .map(|(api, package, source, expected, templates)| CaseStudy {
            api: (*api).into(),
            package: (*package).into(),
            protocol: bundled_lts(source, api),
            templates: templates
                .iter()
                .map(|(a, r, c)| PolicyTemplate {
                    acquire: Action::new(*a),
                    release: Action::new(*r),
                    callback: Action::new(*c),
                })
                .collect(),
            expected: *expected,
        })
        .collect()
}

/// The 3-state enforcer for an acquire/release policy: arm on the
/// acquire after onCreate, and re-insert the release in front of the
/// callback when the app forgot it.
pub fn generate_enforcer(t: &PolicyTemplate) -> EditAutomaton {
    let one = |a: &Action| Trace(vec![a.clone()]);
    let on_create = Action::new("onCreate");
    EditAutomaton {
        name: format!("enf_{}", t.acquire),
        alphabet: [
            on_create.clone(),
            t.callback.clone(),
            t.acquire.clone(),
            t.release.clone(),
        ]
        .into_iter()
        .collect(),
        states: ["0".into(), "1".into(), "2".into()].into_iter().collect(),
        initial: "0".into(),
        transitions: vec![
            EditTransition {
                from: "0".into(),
                on: on_create.clone(),
                to: "1".into(),
                emit: one(&on_create),
            },
            EditTransition {
                from: "1".into(),
                on: t.callback.clone(),
                to: "0".into(),
                emit: one(&t.callback),
            },
            EditTransition {
                from: "1".into(),
                on: t.acquire.clone(),
                to: "2".into(),
                emit: one(&t.acquire),
            },
            EditTransition {
                from: "2".into(),
                on: t.release.clone(),
                to: "1".into(),
                emit: one(&t.release),
            },
            EditTransition {
                from: "2".into(),
                on: t.callback.clone(),
                to: "0".into(),
                emit: Trace(vec![t.release.clone(), t.callback.clone()]),
            },
        ],
    }
}

/// `AG (act(acquire) => AX A[ !act(callback) W act(release) ])`, bound
/// to the case's resource component and the lifecycle model.
pub fn generate_policy(t: &PolicyTemplate, resource: &str) -> Policy {
    let formula = CtlFormula::ag(CtlFormula::implies(
        CtlFormula::Atom(t.acquire.name().into()),
        CtlFormula::ax(CtlFormula::aw(
            CtlFormula::not(CtlFormula::Atom(t.callback.name().into())),
            CtlFormula::Atom(t.release.name().into()),
        )),
    ));
    let mut bindings = BTreeMap::new();
    bindings.insert(
        t.acquire.name().to_owned(),
        (t.acquire.clone(), resource.to_owned()),
    );
    bindings.insert(
        t.release.name().to_owned(),
        (t.release.clone(), resource.to_owned()),
    );
    bindings.insert(
        t.callback.name().to_owned(),
        (t.callback.clone(), "app".to_owned()),
    );
    Policy {
        name: format!("{}_{}", t.acquire, t.release),
        formula,
        bindings,
    }
}

impl CaseStudy {
    /// Routing for the case: lifecycle callbacks to the app, everything
    /// else to the resource.
    pub fn targets(&self) -> TargetMap {
        let mut targets = TargetMap::new();
        for (_, a, _) in &lifecycle().transitions {
            targets.insert(a.clone(), "app".into());
        }
        for (_, a, _) in &self.protocol.transitions {
            targets.insert(a.clone(), self.api.clone());
        }
        targets
    }

    /// Builds the verification network for a subset of the case's
    /// enforcers (indices into `templates`).
    pub fn network(&self, indices: &[usize]) -> Result<Network, ComposeError> {
        let enforcers: Vec<EditAutomaton> = indices
            .iter()
            .map(|&i| generate_enforcer(&self.templates[i]))
            .collect();
        let frameworks = [
            ("app".to_string(), lifecycle().to_io()),
            (self.api.clone(), self.protocol.to_io()),
        ];
        build_network(
            &enforcers,
            &frameworks,
            &self.targets(),
            CompletionPolicy::Strict,
        )
    }

    /// The policies enforced by a subset of the case's enforcers.
    pub fn policies(&self, indices: &[usize]) -> Vec<Policy> {
        indices
            .iter()
            .map(|&i| generate_policy(&self.templates[i], &self.api))
            .collect()
    }

    /// Verifies a subset of the case's enforcers against their own
    /// policies.
    pub fn verify_subset(
        &self,
        indices: &[usize],
        max_states: usize,
    ) -> Result<VerificationReport, CatalogError> {
        let net = self.network(indices)?;
        Ok(verify(&net, &self.policies(indices), max_states)?)
    }

    /// Verifies all of the case's enforcers together.
    pub fn verify_all(&self, max_states: usize) -> Result<VerificationReport, CatalogError> {
        let all: Vec<usize> = (0..self.templates.len()).collect();
        self.verify_subset(&all, max_states)
    }
}

/// One output row of [`run_table1`].
#[derive(Debug, Clone)]
pub struct Table1Row {
    pub api: String,
    pub package: String,
    pub expected: Verdict,
    /// `Err` carries the reason the row is inconclusive.
    pub actual: Result<Verdict, String>,
    pub report: Option<VerificationReport>,
}

impl Table1Row {
    pub fn matches(&self) -> bool {
        self.actual.as_ref().map(|v| *v == self.expected).unwrap_or(false)
    }
}

/// Runs every case with all its enforcers activated together and
/// compares the interference verdicts with the expected column.
pub fn run_table1(max_states: usize) -> Vec<Table1Row> {
    list_cases()
        .into_iter()
        .map(|case| {
            let (actual, report) = match case.verify_all(max_states) {
                Ok(r) => {
                    let v = if r.interference { Verdict::Yes } else { Verdict::No };
                    (Ok(v), Some(r))
                }
                Err(e) => (Err(e.to_string()), None),
            };
            Table1Row {
                api: case.api,
                package: case.package,
                expected: case.expected,
                actual,
                report,
            }
        })
        .collect()
}

/// The documented compatibility evidence: the Camera's lock/unlock and
/// startFaceDetection/stopFaceDetection enforcers verified together.
pub fn camera_compatible_pair(max_states: usize) -> Result<VerificationReport, CatalogError> {
    let cases = list_cases();
    let camera = cases
        .iter()
        .find(|c| c.api == "Camera")
        .expect("Camera case present");
    camera.verify_subset(&[0, 2], max_states)
}
