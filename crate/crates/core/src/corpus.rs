//! Synthetic elevator-control corpus.
//!
//! Nine training files hold 62 mapping blocks drawn from nine past systems;
//! the model is a 364-construct elevator control system (8 classes plus 4
//! subclasses, a 13-state controller with 27 transitions, and ASL-derived
//! method bodies).
//!
//! Coverage is engineered: 356 constructs have an exact match in at least
//! one block, so the optimal fitness is 356/364. Of the other 8, five have a
//! nearest match scoring at least 0.5 and three use predicate names absent
//! from every block.
//!
//! Every block is one class of a past system. It always carries the `class`
//! entry; each other entry kind is included according to a fixed pattern
//! over the block id, so coverage is deterministic. Common kinds appear in
//! about 97% of blocks; below roughly 95% the default swarm rarely finds the
//! optimum on a model this size.

use std::fmt::Write as _;

pub const ECS_BLOCKS: usize = 62;
pub const ECS_CONSTRUCTS: usize = 364;
pub const ECS_EXACT: usize = 356;
pub const ECS_NEAREST: usize = 5;
pub const ECS_UNMATCHED: usize = 3;

/// Training systems and the number of blocks each contributes.
const SYSTEMS: [(&str, usize); 9] = [
    ("atm", 7),
    ("library", 7),
    ("vending_machine", 7),
    ("traffic_light", 7),
    ("parking_garage", 7),
    ("hotel_booking", 7),
    ("thermostat", 7),
    ("microwave", 7),
    ("railway_crossing", 6),
];

/// Model type → Java type.
const TYPES: [(&str, &str); 5] = [
    ("integer", "int"),
    ("boolean", "boolean"),
    ("string", "String"),
    ("real", "double"),
    ("void", "void"),
];

/// An entry kind. Common kinds are left out of the blocks whose id satisfies
/// `id % modulus == residue`; kinds marked `rare` appear only in those blocks.
struct Kind {
    entry: String,
    modulus: u32,
    residue: u32,
    rare: bool,
}

impl Kind {
    fn in_block(&self, id: u32) -> bool {
        (id % self.modulus == self.residue) == self.rare
    }
}

/// Entry kinds. Common kinds are missing from about one block in thirty;
/// the rarer ones (subclassing, associations, state models) from more.
fn kinds() -> Vec<Kind> {
    let mut kinds = Vec::new();
    let mut push = |entry: String, modulus: u32, residue: u32| {
        kinds.push(Kind {
            entry,
            modulus,
            residue,
            rare: false,
        })
    };
    push(
        "generalization($S, $P) => java_extends($S, $P)".into(),
        20,
        3,
    );
    for (i, (t, j)) in TYPES[..4].iter().enumerate() {
        push(
            format!("attribute($C, $A, {t}) => java_field($C, $A, {j})"),
            31,
            5 + 7 * i as u32,
        );
    }
    for (i, (t, j)) in TYPES.iter().enumerate() {
        push(
            format!("operation($C, $M, {t}) => java_method($C, $M, {j})"),
            31,
            2 + 6 * i as u32,
        );
    }
    for (i, (t, j)) in TYPES[..4].iter().enumerate() {
        push(
            format!("parameter($C, $M, $P, {t}) => java_param($C, $M, $P, {j})"),
            31,
            4 + 5 * i as u32,
        );
    }
    push(
        "association($A, $B, $R, one) => java_field($A, $R, $B)".into(),
        21,
        8,
    );
    push(
        "association($A, $B, $R, many) => java_field($A, $R, \"java.util.List\")".into(),
        21,
        15,
    );
    push("state($C, $S) => java_state_enum($C, $S)".into(), 25, 11);
    push(
        "initial_state($C, $S) => java_initial_state($C, $S)".into(),
        25,
        11,
    );
    push(
        "transition($C, $E, $F, $T) => java_transition($C, $E, $F, $T)".into(),
        25,
        11,
    );
    push(
        "asl_assign($C, $M, $N, $X) => java_stmt($C, $M, $N, $X)".into(),
        31,
        9,
    );
    push(
        "asl_call($C, $M, $N, $X) => java_stmt($C, $M, $N, $X)".into(),
        31,
        19,
    );
    push(
        "asl_generate($C, $M, $N, $X) => java_stmt($C, $M, $N, $X)".into(),
        31,
        29,
    );
    // taught by a few training systems, never used by the elevator model
    kinds.push(Kind {
        entry: "interface($I) => java_interface($I)".into(),
        modulus: 9,
        residue: 4,
        rare: true,
    });
    kinds.push(Kind {
        entry: "enumeration($E, $V) => java_enum_value($E, $V)".into(),
        modulus: 13,
        residue: 6,
        rare: true,
    });
    kinds
}

fn training_files() -> Vec<(String, String)> {
    let kinds = kinds();
    let mut files = Vec::new();
    let mut id = 1u32;
    for (system, count) in SYSTEMS {
        let mut text = format!("% transformation examples from the {system} system\n");
        for _ in 0..count {
            let _ = writeln!(text, "\nblock {id}");
            text.push_str("map: class($C) => java_class($C).\n");
            for k in &kinds {
                if k.in_block(id) {
                    let _ = writeln!(text, "map: {}.", k.entry);
                }
            }
            text.push_str("endblock\n");
            id += 1;
        }
        files.push((format!("{system}.blocks"), text));
    }
    files
}

struct Op {
    class: &'static str,
    name: &'static str,
    ret: &'static str,
    params: &'static [(&'static str, &'static str)],
    /// (ASL kind, pre-translated Java statement)
    body: &'static [(&'static str, &'static str)],
}

const CLASSES: [(&str, Option<&str>); 12] = [
    ("Elevator", None),
    ("ElevatorController", None),
    ("Door", None),
    ("Floor", None),
    ("Button", None),
    ("Request", None),
    ("Scheduler", None),
    ("Display", None),
    ("FloorButton", Some("Button")),
    ("CabinButton", Some("Button")),
    ("UpRequest", Some("Request")),
    ("DownRequest", Some("Request")),
];

const ATTRIBUTES: [(&str, &str, &str); 33] = [
    ("Elevator", "currentFloor", "integer"),
    ("Elevator", "direction", "string"),
    ("Elevator", "capacity", "integer"),
    ("Elevator", "load", "real"),
    ("Elevator", "moving", "boolean"),
    ("Elevator", "speed", "real"),
    ("ElevatorController", "elevatorCount", "integer"),
    ("ElevatorController", "emergency", "boolean"),
    ("ElevatorController", "mode", "string"),
    ("Door", "open", "boolean"),
    ("Door", "locked", "boolean"),
    ("Door", "obstructed", "boolean"),
    ("Door", "openTime", "integer"),
    ("Floor", "number", "integer"),
    ("Floor", "label", "string"),
    ("Floor", "hasUpButton", "boolean"),
    ("Floor", "hasDownButton", "boolean"),
    ("Button", "pressed", "boolean"),
    ("Button", "lit", "boolean"),
    ("Button", "label", "string"),
    ("Request", "floor", "integer"),
    ("Request", "served", "boolean"),
    ("Request", "priority", "integer"),
    ("Scheduler", "strategy", "string"),
    ("Scheduler", "pending", "integer"),
    ("Scheduler", "loadFactor", "real"),
    ("Display", "text", "string"),
    ("Display", "brightness", "integer"),
    ("Display", "visible", "boolean"),
    ("FloorButton", "direction", "string"),
    ("CabinButton", "target", "integer"),
    ("UpRequest", "express", "boolean"),
    ("DownRequest", "express", "boolean"),
];

const ASSOCIATIONS: [(&str, &str, &str, &str); 10] = [
    ("ElevatorController", "Elevator", "elevators", "many"),
    ("ElevatorController", "Scheduler", "scheduler", "one"),
    ("ElevatorController", "Floor", "floors", "many"),
    ("Elevator", "Door", "door", "one"),
    ("Elevator", "Display", "display", "one"),
    ("Elevator", "CabinButton", "buttons", "many"),
    ("Elevator", "Floor", "stops", "many"),
    ("Floor", "FloorButton", "buttons", "many"),
    ("Scheduler", "Request", "queue", "many"),
    ("Request", "Floor", "origin", "one"),
];

const OPS: &[Op] = &[
    Op {
        class: "Elevator",
        name: "moveUp",
        ret: "void",
        params: &[],
        body: &[
            ("asl_assign", "direction = \"up\";"),
            ("asl_assign", "moving = true;"),
            ("asl_assign", "currentFloor = currentFloor + 1;"),
            ("asl_call", "display.show(currentFloor);"),
        ],
    },
    Op {
        class: "Elevator",
        name: "moveDown",
        ret: "void",
        params: &[],
        body: &[
            ("asl_assign", "direction = \"down\";"),
            ("asl_assign", "moving = true;"),
            ("asl_assign", "currentFloor = currentFloor - 1;"),
            ("asl_call", "display.show(currentFloor);"),
        ],
    },
    Op {
        class: "Elevator",
        name: "stop",
        ret: "void",
        params: &[],
        body: &[
            ("asl_assign", "moving = false;"),
            ("asl_assign", "speed = 0.0;"),
            ("asl_generate", "door.handleEvent(\"open\");"),
        ],
    },
    Op {
        class: "Elevator",
        name: "goTo",
        ret: "void",
        params: &[("floor", "integer")],
        body: &[
            (
                "asl_assign",
                "direction = floor > currentFloor ? \"up\" : \"down\";",
            ),
            ("asl_assign", "moving = true;"),
            ("asl_call", "stops.add(floor);"),
        ],
    },
    Op {
        class: "Elevator",
        name: "isIdle",
        ret: "boolean",
        params: &[],
        body: &[
            ("asl_assign", "boolean idle = !moving && stops.isEmpty();"),
            ("asl_call", "return idle;"),
        ],
    },
    Op {
        class: "Elevator",
        name: "getCurrentFloor",
        ret: "integer",
        params: &[],
        body: &[("asl_call", "return currentFloor;")],
    },
    Op {
        class: "Elevator",
        name: "addLoad",
        ret: "boolean",
        params: &[("weight", "real")],
        body: &[
            ("asl_assign", "boolean fits = load + weight <= capacity;"),
            ("asl_assign", "load = fits ? load + weight : load;"),
            ("asl_call", "return fits;"),
        ],
    },
    Op {
        class: "Elevator",
        name: "describe",
        ret: "string",
        params: &[],
        body: &[("asl_call", "return \"Elevator at \" + currentFloor;")],
    },
    Op {
        class: "ElevatorController",
        name: "dispatch",
        ret: "void",
        params: &[("floor", "integer"), ("direction", "string")],
        body: &[
            ("asl_assign", "Request request = new Request();"),
            ("asl_assign", "request.floor = floor;"),
            ("asl_call", "scheduler.enqueue(request);"),
            ("asl_generate", "handleEvent(\"request\");"),
        ],
    },
    Op {
        class: "ElevatorController",
        name: "enterEmergency",
        ret: "void",
        params: &[],
        body: &[
            ("asl_assign", "emergency = true;"),
            ("asl_assign", "mode = \"emergency\";"),
            ("asl_generate", "handleEvent(\"alarm\");"),
        ],
    },
    Op {
        class: "ElevatorController",
        name: "reset",
        ret: "void",
        params: &[],
        body: &[
            ("asl_assign", "emergency = false;"),
            ("asl_assign", "mode = \"normal\";"),
            ("asl_generate", "handleEvent(\"reset\");"),
        ],
    },
    Op {
        class: "ElevatorController",
        name: "setMode",
        ret: "void",
        params: &[("newMode", "string")],
        body: &[("asl_assign", "mode = newMode;")],
    },
    Op {
        class: "ElevatorController",
        name: "isEmergency",
        ret: "boolean",
        params: &[],
        body: &[("asl_call", "return emergency;")],
    },
    Op {
        class: "ElevatorController",
        name: "selectElevator",
        ret: "integer",
        params: &[("floor", "integer")],
        body: &[
            (
                "asl_assign",
                "int best = scheduler.choose(floor, elevatorCount);",
            ),
            ("asl_call", "return best;"),
        ],
    },
    Op {
        class: "Door",
        name: "openDoor",
        ret: "void",
        params: &[],
        body: &[
            ("asl_assign", "open = !locked;"),
            ("asl_call", "startTimer(openTime);"),
        ],
    },
    Op {
        class: "Door",
        name: "closeDoor",
        ret: "void",
        params: &[],
        body: &[
            ("asl_assign", "open = obstructed;"),
            ("asl_generate", "notifyClosed();"),
        ],
    },
    Op {
        class: "Door",
        name: "lock",
        ret: "void",
        params: &[],
        body: &[("asl_assign", "locked = true;")],
    },
    Op {
        class: "Door",
        name: "unlock",
        ret: "void",
        params: &[],
        body: &[("asl_assign", "locked = false;")],
    },
    Op {
        class: "Door",
        name: "isOpen",
        ret: "boolean",
        params: &[],
        body: &[("asl_call", "return open;")],
    },
    Op {
        class: "Door",
        name: "setOpenTime",
        ret: "void",
        params: &[("millis", "integer")],
        body: &[("asl_assign", "openTime = millis;")],
    },
    Op {
        class: "Floor",
        name: "callUp",
        ret: "void",
        params: &[],
        body: &[
            ("asl_call", "buttons.get(0).press();"),
            ("asl_generate", "requestService(number, \"up\");"),
        ],
    },
    Op {
        class: "Floor",
        name: "callDown",
        ret: "void",
        params: &[],
        body: &[
            ("asl_call", "buttons.get(1).press();"),
            ("asl_generate", "requestService(number, \"down\");"),
        ],
    },
    Op {
        class: "Floor",
        name: "getNumber",
        ret: "integer",
        params: &[],
        body: &[("asl_call", "return number;")],
    },
    Op {
        class: "Floor",
        name: "getLabel",
        ret: "string",
        params: &[],
        body: &[("asl_call", "return label;")],
    },
    Op {
        class: "Button",
        name: "press",
        ret: "void",
        params: &[],
        body: &[
            ("asl_assign", "pressed = true;"),
            ("asl_assign", "lit = true;"),
        ],
    },
    Op {
        class: "Button",
        name: "release",
        ret: "void",
        params: &[],
        body: &[
            ("asl_assign", "pressed = false;"),
            ("asl_assign", "lit = false;"),
        ],
    },
    Op {
        class: "Button",
        name: "isLit",
        ret: "boolean",
        params: &[],
        body: &[("asl_call", "return lit;")],
    },
    Op {
        class: "Request",
        name: "markServed",
        ret: "void",
        params: &[],
        body: &[("asl_assign", "served = true;")],
    },
    Op {
        class: "Request",
        name: "getPriority",
        ret: "integer",
        params: &[],
        body: &[("asl_call", "return priority;")],
    },
    Op {
        class: "Request",
        name: "setPriority",
        ret: "void",
        params: &[("value", "integer")],
        body: &[("asl_assign", "priority = value;")],
    },
    Op {
        class: "Scheduler",
        name: "enqueue",
        ret: "void",
        params: &[("request", "string")],
        body: &[
            ("asl_call", "queue.add(request);"),
            ("asl_assign", "pending = pending + 1;"),
        ],
    },
    Op {
        class: "Scheduler",
        name: "choose",
        ret: "integer",
        params: &[("floor", "integer"), ("count", "integer")],
        body: &[
            ("asl_assign", "int choice = floor % count;"),
            ("asl_call", "return choice;"),
        ],
    },
    Op {
        class: "Scheduler",
        name: "rebalance",
        ret: "void",
        params: &[("factor", "real")],
        body: &[
            ("asl_assign", "loadFactor = factor;"),
            ("asl_call", "queue.sort(null);"),
        ],
    },
    Op {
        class: "Scheduler",
        name: "hasPending",
        ret: "boolean",
        params: &[],
        body: &[("asl_call", "return pending > 0;")],
    },
    Op {
        class: "Display",
        name: "show",
        ret: "void",
        params: &[("floor", "integer")],
        body: &[
            ("asl_assign", "text = String.valueOf(floor);"),
            ("asl_assign", "visible = true;"),
        ],
    },
    Op {
        class: "Display",
        name: "setBrightness",
        ret: "void",
        params: &[("level", "integer")],
        body: &[("asl_assign", "brightness = level;")],
    },
    Op {
        class: "Display",
        name: "clear",
        ret: "void",
        params: &[],
        body: &[
            ("asl_assign", "text = \"\";"),
            ("asl_assign", "visible = false;"),
        ],
    },
    Op {
        class: "Elevator",
        name: "emergencyStop",
        ret: "void",
        params: &[],
        body: &[
            ("asl_assign", "moving = false;"),
            ("asl_assign", "speed = 0.0;"),
            ("asl_generate", "door.lock();"),
        ],
    },
    Op {
        class: "Elevator",
        name: "serviceFloor",
        ret: "void",
        params: &[("floor", "integer")],
        body: &[
            ("asl_call", "stops.remove(Integer.valueOf(floor));"),
            ("asl_assign", "currentFloor = floor;"),
            ("asl_call", "stop();"),
            ("asl_generate", "door.openDoor();"),
        ],
    },
    Op {
        class: "ElevatorController",
        name: "tick",
        ret: "void",
        params: &[("millis", "integer")],
        body: &[
            ("asl_call", "scheduler.rebalance(millis / 1000.0);"),
            ("asl_assign", "elevatorCount = elevators.size();"),
            ("asl_generate", "handleEvent(\"timeout\");"),
        ],
    },
    Op {
        class: "ElevatorController",
        name: "shutdown",
        ret: "void",
        params: &[],
        body: &[
            ("asl_assign", "mode = \"off\";"),
            ("asl_call", "scheduler.clearQueue();"),
            ("asl_generate", "handleEvent(\"fault\");"),
        ],
    },
    Op {
        class: "Door",
        name: "reopen",
        ret: "void",
        params: &[],
        body: &[
            ("asl_assign", "obstructed = true;"),
            ("asl_call", "openDoor();"),
        ],
    },
    Op {
        class: "Door",
        name: "holdOpen",
        ret: "void",
        params: &[("millis", "integer")],
        body: &[
            ("asl_assign", "openTime = openTime + millis;"),
            ("asl_call", "openDoor();"),
        ],
    },
    Op {
        class: "Display",
        name: "flash",
        ret: "void",
        params: &[("times", "integer")],
        body: &[
            ("asl_assign", "visible = times % 2 == 0;"),
            ("asl_assign", "brightness = 100;"),
        ],
    },
    Op {
        class: "Scheduler",
        name: "clearQueue",
        ret: "void",
        params: &[],
        body: &[
            ("asl_call", "queue.clear();"),
            ("asl_assign", "pending = 0;"),
        ],
    },
    Op {
        class: "Floor",
        name: "resetButtons",
        ret: "void",
        params: &[],
        body: &[
            ("asl_call", "buttons.get(0).release();"),
            ("asl_call", "buttons.get(1).release();"),
        ],
    },
    Op {
        class: "FloorButton",
        name: "getDirection",
        ret: "string",
        params: &[],
        body: &[("asl_call", "return direction;")],
    },
    Op {
        class: "CabinButton",
        name: "setTarget",
        ret: "void",
        params: &[("floor", "integer")],
        body: &[("asl_assign", "target = floor;"), ("asl_call", "press();")],
    },
    Op {
        class: "UpRequest",
        name: "isExpress",
        ret: "boolean",
        params: &[],
        body: &[("asl_call", "return express;")],
    },
    Op {
        class: "DownRequest",
        name: "isExpress",
        ret: "boolean",
        params: &[],
        body: &[("asl_call", "return express;")],
    },
];

const CONTROLLER: &str = "ElevatorController";

const STATES: [&str; 13] = [
    "Initializing",
    "Idle",
    "DoorsOpening",
    "DoorsOpen",
    "DoorsClosing",
    "MovingUp",
    "MovingDown",
    "Decelerating",
    "Arrived",
    "Stopped",
    "Emergency",
    "Maintenance",
    "OutOfService",
];

/// (event, from, to); the 27th transition is the incomplete one below.
const TRANSITIONS: [(&str, &str, &str); 26] = [
    ("ready", "Initializing", "Idle"),
    ("request", "Idle", "DoorsClosing"),
    ("arrive", "Idle", "DoorsOpening"),
    ("opened", "DoorsOpening", "DoorsOpen"),
    ("timeout", "DoorsOpen", "DoorsClosing"),
    ("obstruct", "DoorsClosing", "DoorsOpening"),
    ("closedUp", "DoorsClosing", "MovingUp"),
    ("closedDown", "DoorsClosing", "MovingDown"),
    ("closedIdle", "DoorsClosing", "Idle"),
    ("approach", "MovingUp", "Decelerating"),
    ("approach", "MovingDown", "Decelerating"),
    ("halt", "Decelerating", "Arrived"),
    ("settle", "Arrived", "DoorsOpening"),
    ("stop", "MovingUp", "Stopped"),
    ("stop", "MovingDown", "Stopped"),
    ("resume", "Stopped", "Idle"),
    ("alarm", "Idle", "Emergency"),
    ("alarm", "MovingUp", "Emergency"),
    ("alarm", "MovingDown", "Emergency"),
    ("alarm", "DoorsOpen", "Emergency"),
    ("reset", "Emergency", "Idle"),
    ("service", "Idle", "Maintenance"),
    ("serviced", "Maintenance", "Idle"),
    ("fault", "Maintenance", "OutOfService"),
    ("fault", "Emergency", "OutOfService"),
    ("repaired", "OutOfService", "Initializing"),
];

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    c.next()
        .map(|f| f.to_ascii_uppercase().to_string() + c.as_str())
        .unwrap_or_default()
}

/// `getX`, or `isX` for booleans; `hasX` attributes are their own getter.
fn accessor_name(attr: &str, ty: &str) -> String {
    match ty {
        "boolean" if attr.starts_with("has") => attr.to_string(),
        "boolean" => format!("is{}", capitalize(attr)),
        _ => format!("get{}", capitalize(attr)),
    }
}

fn model_text() -> String {
    let mut out = String::from(
        "% Elevator Control System: class model, controller state model and ASL actions\n",
    );
    for (class, parent) in CLASSES {
        let _ = writeln!(out, "\n% {class}");
        let _ = writeln!(out, "class({class}).");
        if let Some(p) = parent {
            let _ = writeln!(out, "generalization({class}, {p}).");
        }
        for (_, a, t) in ATTRIBUTES.iter().filter(|(c, _, _)| *c == class) {
            let _ = writeln!(out, "attribute({class}, {a}, {t}).");
        }
        match class {
            "Elevator" => {
                // no `long` in the training data; nearest is an integer field
                out.push_str("attribute(Elevator, loadWeight, long).\n");
                out.push_str("association(Elevator, Floor, visited, optional).\n");
                out.push_str("constraint(Elevator, \"currentFloor <= topFloor\").\n");
            }
            "Request" => out.push_str("attribute(Request, timestamp, date).\n"),
            "Door" => out.push_str("operation(Door, forceOpen).\n"),
            _ => {}
        }
        for (_, b, r, m) in ASSOCIATIONS.iter().filter(|(a, _, _, _)| *a == class) {
            let _ = writeln!(out, "association({class}, {b}, {r}, {m}).");
        }
        for (_, a, t) in ATTRIBUTES.iter().filter(|(c, _, _)| *c == class) {
            let getter = accessor_name(a, t);
            if !OPS.iter().any(|o| o.class == class && o.name == getter) {
                let _ = writeln!(out, "operation({class}, {getter}, {t}).");
                let _ = writeln!(out, "asl_call({class}, {getter}, 1, \"return {a};\").");
            }
            let setter = format!("set{}", capitalize(a));
            if *t != "boolean" && !OPS.iter().any(|o| o.class == class && o.name == setter) {
                let _ = writeln!(out, "operation({class}, {setter}, void).");
                let _ = writeln!(out, "parameter({class}, {setter}, value, {t}).");
                let _ = writeln!(out, "asl_assign({class}, {setter}, 1, \"{a} = value;\").");
            }
        }
        for op in OPS.iter().filter(|o| o.class == class) {
            let _ = writeln!(out, "operation({class}, {}, {}).", op.name, op.ret);
            for (p, t) in op.params {
                let _ = writeln!(out, "parameter({class}, {}, {p}, {t}).", op.name);
            }
            for (seq, (kind, code)) in op.body.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "{kind}({class}, {}, {}, \"{}\").",
                    op.name,
                    seq + 1,
                    code.replace('\\', "\\\\").replace('"', "\\\"")
                );
            }
        }
    }
    let _ = writeln!(out, "\n% {CONTROLLER} state model");
    for s in STATES {
        let _ = writeln!(out, "state({CONTROLLER}, {s}).");
    }
    let _ = writeln!(out, "initial_state({CONTROLLER}, {}).", STATES[0]);
    for (e, f, t) in TRANSITIONS {
        let _ = writeln!(out, "transition({CONTROLLER}, {e}, {f}, {t}).");
    }
    // target state missing
    let _ = writeln!(out, "transition({CONTROLLER}, powerLoss, MovingUp).");
    let _ = writeln!(out, "timer({CONTROLLER}, doorTimer, 5000).");
    let _ = writeln!(out, "guard({CONTROLLER}, closedUp, \"door.isClosed()\").");
    out
}

/// Generated training files (name, text) and model file text.
#[derive(Debug, Clone)]
pub struct Corpus {
    pub training_files: Vec<(String, String)>,
    pub model_name: String,
    pub model: String,
}

/// The elevator-control corpus. Deterministic: every call returns the same text.
pub fn ecs() -> Corpus {
    Corpus {
        training_files: training_files(),
        model_name: "ecs.model".to_string(),
        model: model_text(),
    }
}
