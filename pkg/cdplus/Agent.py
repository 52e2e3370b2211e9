#	cdplus - CD+ knowledge representation engine and dialogue simulator
#	Copyright (C) 2024 the cdplus authors
#
#	This file is part of cdplus.
#
#	cdplus is free software; you can redistribute it and/or modify
#	it under the terms of the GNU General Public License as published by
#	the Free Software Foundation; this program is ONLY licensed under
#	version 3 of the License, later versions are explicitly excluded.
#
#	cdplus is distributed in the hope that it will be useful,
#	but WITHOUT ANY WARRANTY; without even the implied warranty of
#	MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
#	GNU General Public License for more details.
#
#	You should have received a copy of the GNU General Public License
#	along with cdplus; if not, write to the Free Software
#	Foundation, Inc., 59 Temple Place, Suite 330, Boston, MA  02111-1307  USA

import logging
from dataclasses import dataclass, field
from typing import Optional
from .CDGraph import CDStore, EntityRef
from .CDXFormat import SAtom, SList, build_node
from .Concepts import PrimitiveAct, StateName, Modifier, LinkKind, Attitude, Illocution, Tone, EventKind
from .Rules import Rulebase, AgentView, FiringRecord, CauseRecord, fire_cycle
from .Surface import TemplateSet
from .Trace import Trace, Event
from .World import PhysicalCore, goal_for
from .Exceptions import CDPlusError, AgentError, NoModel, NoTemplate, Unrecognized, AmbiguousTemplate, WorldError

_log = logging.getLogger(__name__)

MAX_CYCLES = 64

@dataclass
class MConc():
	mconc_id: str
	want: str
	status: str = "active"
	origin: str = "intrinsic"
	requester: Optional[str] = None
	announced: bool = False

	def transition(self, status: str):
		if self.status != "active":
			raise AgentError("M-CONC %s is already %s." % (self.mconc_id, self.status))
		self.status = status

	def serialize(self, store: CDStore) -> dict:
		return {
			"id":			self.mconc_id,
			"want":			store.canonicalize(self.want),
			"status":		self.status,
			"origin":		self.origin,
			"requester":	self.requester,
		}

@dataclass
class ProspEntry():
	cz: str
	stored_at: int
	status: str = "open"
	mconc: Optional[str] = None

	def resolve(self, status: str):
		if self.status != "open":
			raise AgentError("Prospect is already %s." % (self.status))
		self.status = status

	def serialize(self, store: CDStore) -> dict:
		return { "cz": store.canonicalize(self.cz), "stored_at": self.stored_at, "status": self.status, "mconc": self.mconc }

@dataclass
class Expc():
	episodic: list = field(default_factory = list)
	prosp: list = field(default_factory = list)

@dataclass
class OtherModel():
	"""What an agent believes about another: its attitude, its rules and its expectations."""
	agent: str
	attitude: Optional[Attitude]
	rulebase: Rulebase
	prosp: list = field(default_factory = list)

@dataclass(frozen=True)
class IllocutionKnowledge():
	illocution: Illocution
	answered: StateName
	unanswered: Optional[StateName] = None

@dataclass
class Conc():
	rulebase: Rulebase
	attitudes: dict = field(default_factory = dict)
	models: dict = field(default_factory = dict)
	illocutions: dict = field(default_factory = dict)

@dataclass
class Affect():
	state: StateName
	obj: str
	onset: int

@dataclass(frozen=True)
class Message():
	speaker: str
	addressee: str
	text: str
	illocution: Optional[str] = None
	event_id: Optional[int] = None

@dataclass
class Utterance():
	text: str
	template_id: str
	illocution: Illocution
	cz: str
	addressee: str
	intent_event: Optional[int] = None

@dataclass
class Intent():
	cz: str
	illocution: Illocution
	addressee: str
	event_id: int

@dataclass(frozen=True)
class StepResult():
	outbox: list
	effects: list
	state: "AgentState"

def prosp_match(store: CDStore, expected: str, incoming: str) -> Optional[str]:
	"""Compares an incoming conceptualization with an anticipated one.

	Returns "fulfilled" when the incoming content states what was anticipated
	(modality and a missing source aside), "contradicted" when it negates an
	anticipated ability, and None otherwise."""
	expected_cz = store.cz(expected)
	incoming_cz = store.cz(incoming)
	core = dict(ignore_mods = list(Modifier), ignore_roles = ("source", ))
	target = expected
	if (expected_cz.act == PrimitiveAct.WANT) and isinstance(expected_cz.obj, str) and store.is_cz(expected_cz.obj):
		target = expected_cz.obj
	if store.canonical_core(target, **core) != store.canonical_core(incoming, **core):
		return None
	if Modifier.neg in incoming_cz.mods:
		if (target == expected) and (Modifier.can in expected_cz.mods):
			return "contradicted"
		return None
	if Modifier.qwhy in incoming_cz.mods:
		return None
	return "fulfilled"

@dataclass
class AgentState():
	name: str
	store: CDStore
	conc: Conc
	tone: Tone = Tone.Neutral
	capabilities: dict = field(default_factory = dict)
	motc: list = field(default_factory = list)
	expc: Expc = field(default_factory = Expc)
	affects: dict = field(default_factory = dict)
	bf: Optional[Utterance] = None
	deferred: list = field(default_factory = list)
	ct_phase: str = "perceive"
	percepts: list = field(default_factory = list)
	causes: list = field(default_factory = list)
	elaborations: dict = field(default_factory = dict)
	directives: dict = field(default_factory = dict)
	tick: int = 0

	def serialize(self) -> dict:
		store = self.store
		return {
			"name":			self.name,
			"tick":			self.tick,
			"tone":			self.tone.value,
			"capabilities":	dict(sorted(self.capabilities.items())),
			"ct_phase":		self.ct_phase,
			"motc":			[ mconc.serialize(store) for mconc in self.motc ],
			"affects":		[ { "state": affect.state.value, "cz": store.canonicalize(affect.obj), "onset": affect.onset } for affect in self.affects.values() ],
			"prosp":		[ entry.serialize(store) for entry in self.expc.prosp ],
			"episodic":		list(self.expc.episodic),
			"attitudes":	{ name: attitude.value for (name, attitude) in sorted(self.conc.attitudes.items()) },
			"models":		{ name: {
								"attitude":	None if (model.attitude is None) else model.attitude.value,
								"rules":	model.rulebase.names,
								"prosp":	[ entry.serialize(store) for entry in model.prosp ],
							} for (name, model) in sorted(self.conc.models.items()) },
			"bf":			None if (self.bf is None) else self.bf.text,
			"deferred":		[ store.canonicalize(intent.cz) for intent in self.deferred ],
			"percepts":		list(self.percepts),
		}

class Agent():
	def __init__(self, state: AgentState, templates: TemplateSet):
		self._state = state
		self._templates = templates
		self._tick = 0
		self._trace = None
		self._core = None
		self._events = [ ]
		self._intents = [ ]
		self._refractory = set()
		self._fired = 0
		self._active = False

	@classmethod
	def from_sexpr(cls, section: SList, rulebase: Rulebase, templates: TemplateSet) -> "Agent":
		"""Builds an agent from its '(agent NAME ...)' scenario section."""
		(positional, keywords) = section.split()
		if (len(positional) < 1) or (not isinstance(positional[0], SAtom)):
			raise AgentError("%d:%d: Agent section needs a name." % (section.line, section.col))
		name = str(positional[0].value)
		tone = Tone.lookup(keywords[":tone"].value) if (":tone" in keywords) else Tone.Neutral
		if tone is None:
			raise AgentError("%d:%d: Unknown tone for %s." % (section.line, section.col, name))
		state = AgentState(name = name, store = CDStore(), conc = Conc(rulebase = rulebase), tone = tone)
		for form in positional[1:]:
			cls._read_entry(state, form, rulebase)
		return cls(state, templates)

	@staticmethod
	def _read_entry(state: AgentState, form: SList, rulebase: Rulebase):
		if not isinstance(form, SList):
			raise AgentError("%d:%d: Unexpected %s in agent %s." % (form.line, form.col, form.flat(), state.name))
		(args, keywords) = form.split()
		def fail(message: str):
			raise AgentError("%d:%d: %s: %s" % (form.line, form.col, state.name, message))
		if form.head == "capability":
			if (len(args) != 2) or (args[1].value not in ("true", "false")):
				fail("capability takes a name and true/false.")
			state.capabilities[str(args[0].value)] = (args[1].value == "true")
		elif form.head == "attitude":
			attitude = Attitude.lookup(args[1].value) if (len(args) == 2) else None
			if attitude is None:
				fail("attitude takes an agent and a known attitude.")
			state.conc.attitudes[str(args[0].value)] = attitude
		elif form.head == "model":
			if len(args) != 1:
				fail("model takes exactly one agent name.")
			attitude = None
			if ":attitude" in keywords:
				attitude = Attitude.lookup(keywords[":attitude"].value)
				if attitude is None:
					fail("unknown attitude in model.")
			names = [ str(atom.value) for atom in keywords[":rules"].items ] if (":rules" in keywords) else [ ]
			try:
				model_rules = rulebase.subset(names)
			except CDPlusError as e:
				fail(str(e))
			state.conc.models[str(args[0].value)] = OtherModel(agent = str(args[0].value), attitude = attitude, rulebase = model_rules)
		elif form.head == "knows":
			illocution = Illocution.lookup(args[0].value) if (len(args) == 1) else None
			answered = StateName.lookup(keywords[":answered"].value) if (":answered" in keywords) else None
			unanswered = StateName.lookup(keywords[":unanswered"].value) if (":unanswered" in keywords) else None
			if (illocution is None) or (answered is None):
				fail("knows takes an illocution and an :answered state.")
			state.conc.illocutions[illocution] = IllocutionKnowledge(illocution = illocution, answered = answered, unanswered = unanswered)
		elif form.head == "motivation":
			if len(args) != 1:
				fail("motivation takes one WANT conceptualization.")
			try:
				want = build_node(state.store, args[0])
			except CDPlusError as e:
				fail(str(e))
			if state.store.cz(want).act != PrimitiveAct.WANT:
				fail("a motivation must be a WANT.")
			state.motc.append(MConc(mconc_id = "%s-m%d" % (state.name, len(state.motc) + 1), want = want))
		else:
			fail("unknown entry '%s'." % (form.head))

	@property
	def name(self) -> str:
		return self._state.name

	@property
	def state(self) -> AgentState:
		return self._state

	@property
	def store(self) -> CDStore:
		return self._state.store

	@property
	def self_entity(self) -> EntityRef:
		return self.store.entity(self.name)

	def serialize(self) -> dict:
		return self._state.serialize()

	def affect_active(self, state: StateName) -> bool:
		return state in self._state.affects

	def _log_event(self, kind: EventKind, payload: dict, provenance: tuple = (), refs: Optional[dict] = None) -> Event:
		event = self._trace.append(self._tick, self.name, kind, payload, provenance = provenance, refs = refs)
		self._events.append(event)
		return event

	def _render(self, node: Optional[str]) -> Optional[str]:
		return None if (node is None) else self.store.canonicalize(node)

	def _firing(self, record: FiringRecord) -> tuple:
		if record.event_id is None:
			event = self._log_event(EventKind.RuleFiring, record.serialize(self.store), provenance = record.triggers)
			record.event_id = event.event_id
			self._fired += 1
		return (record.event_id, )

	def _produced(self, record: FiringRecord, event: Event) -> Event:
		record.produced.append(event.event_id)
		return event

	def _find_mconc(self, want: str) -> Optional[MConc]:
		for mconc in self._state.motc:
			if mconc.want == want:
				return mconc
		return None

	def _mconc_by_id(self, mconc_id: Optional[str]) -> Optional[MConc]:
		for mconc in self._state.motc:
			if mconc.mconc_id == mconc_id:
				return mconc
		return None

	def _mconc_for_goal(self, goal: str) -> Optional[MConc]:
		store = self.store
		wanted = store.canonicalize(goal)
		candidates = [ mconc for mconc in self._state.motc if (mconc.status == "active") and isinstance(store.cz(mconc.want).obj, str) ]
		for mconc in reversed(candidates):
			if (store.cz(mconc.want).obj == goal) or (store.canonicalize(store.cz(mconc.want).obj) == wanted):
				return mconc
		return None

	def _set_want_status(self, mconc: MConc, status: str, provenance: tuple):
		mconc.transition(status)
		self._log_event(EventKind.WantStatus, { "mconc": mconc.mconc_id, "status": status, "cz": self._render(mconc.want) }, provenance = provenance, refs = { "cz": mconc.want })

	# Effect runtime used by the rule effects

	def assert_node(self, node: str, record: FiringRecord):
		store = self.store
		event = self._produced(record, self._log_event(EventKind.Assertion, { "cz": self._render(node) }, provenance = self._firing(record), refs = { "cz": node }))
		if store.is_cz(node) and (store.cz(node).act == PrimitiveAct.CONCP) and store.is_link(store.cz(node).obj):
			link = store.link(store.cz(node).obj)
			for mconc in self._state.motc:
				if (store.cz(mconc.want).obj == link.cause) and (mconc.want not in self._state.elaborations):
					self._state.elaborations[mconc.want] = (node, event.event_id)

	def set_affect(self, state: StateName, active: bool, obj: Optional[str], record: FiringRecord):
		affects = self._state.affects
		if active == (state in affects):
			return
		if active:
			affects[state] = Affect(state = state, obj = obj, onset = self._tick)
			kind = EventKind.AffectOnset
		else:
			obj = affects.pop(state).obj
			kind = EventKind.AffectOffset
		_log.debug("%s: %s %s", self.name, state.value, "on" if active else "off")
		self._produced(record, self._log_event(kind, { "state": state.value, "cz": self._render(obj) }, provenance = self._firing(record), refs = { "cz": obj }))

	def adopt_want(self, want: str, requester: EntityRef, record: FiringRecord):
		mconc = MConc(mconc_id = "%s-m%d" % (self.name, len(self._state.motc) + 1), want = want, origin = "adopted", requester = requester.name, announced = True)
		self._state.motc.append(mconc)
		payload = { "mconc": mconc.mconc_id, "origin": mconc.origin, "requester": mconc.requester, "cz": self._render(want) }
		self._produced(record, self._log_event(EventKind.Motivation, payload, provenance = self._firing(record), refs = { "cz": want }))

	def invoke_planner(self, goal: str, record: FiringRecord):
		store = self.store
		mconc = self._mconc_for_goal(goal)
		origin = "intrinsic" if (mconc is None) else mconc.origin
		requester = None if (mconc is None) else mconc.requester
		want = goal if (mconc is None) else mconc.want
		provenance = self._firing(record)
		try:
			world_goal = goal_for(store, goal, self._core.world)
			result = self._core.plan(world_goal, store, self.name)
		except WorldError as e:
			_log.warning("%s cannot plan for %s: %s", self.name, self._render(goal), e)
			if mconc is not None:
				self._set_want_status(mconc, "failed", provenance)
			return

		payload = { "result": "success" if result.success else "failure", "goal": self._render(goal), "origin": origin }
		if requester is not None:
			payload["requester"] = requester
		refs = { "cz": want, "goal": goal }
		if result.success:
			payload["steps"] = [ str(action) for action in result.steps ]
		else:
			payload["unsatisfied"] = self._render(result.unsatisfied)
			payload["depth"] = result.at_depth
			refs["unsatisfied"] = result.unsatisfied
		plan_event = self._produced(record, self._log_event(EventKind.PlanResult, payload, provenance = provenance, refs = refs))

		if result.success:
			for action in self._core.execute(result):
				action_cz = action.as_cz(store, self._core.world)
				payload = { "action": str(action), "cz": self._render(action_cz), "origin": origin }
				if requester is not None:
					payload["requester"] = requester
				self._log_event(EventKind.WorldEvent, payload, provenance = (plan_event.event_id, ), refs = { "cz": action_cz })
			if mconc is not None:
				self._set_want_status(mconc, "satisfied", (plan_event.event_id, ))
		else:
			if mconc is not None:
				self._set_want_status(mconc, "failed", (plan_event.event_id, ))
			if (requester is not None) and (requester in self._state.conc.models):
				report = store.restate(goal, mods = [ Modifier.can, Modifier.neg ])
				self.sm_simulate(report, requester, Illocution.Inform, provenance = (plan_event.event_id, ))

	def emit_intent(self, cz: str, illocution: Illocution, addressee: EntityRef, record: FiringRecord):
		payload = { "illocution": illocution.value, "to": addressee.name, "cz": self._render(cz) }
		event = self._produced(record, self._log_event(EventKind.Intent, payload, provenance = self._firing(record), refs = { "cz": cz }))
		self._intents.append(Intent(cz = cz, illocution = illocution, addressee = addressee.name, event_id = event.event_id))
		if (illocution == Illocution.Answer) and (addressee.name in self._state.conc.models):
			self.sm_simulate(cz, addressee.name, illocution, provenance = (event.event_id, ))

	def store_prosp(self, cz: str, record: FiringRecord):
		serving = [ self._state.directives[intent.cz] for intent in self._intents if (intent.event_id in record.triggers) and (intent.cz in self._state.directives) ]
		mconc = None if ((len(serving) == 0) or (serving[0] is None)) else serving[0].mconc_id
		self._state.expc.prosp.append(ProspEntry(cz = cz, stored_at = self._tick, mconc = mconc))
		self._produced(record, self._log_event(EventKind.Assertion, { "cz": self._render(cz), "memory": "prosp" }, provenance = self._firing(record), refs = { "cz": cz }))

	def store_model_prosp(self, other: EntityRef, cz: str, record: FiringRecord):
		model = self._state.conc.models.get(other.name)
		if model is None:
			_log.warning("%s has no model of %s; expectation not stored.", self.name, other.name)
			return
		model.prosp.append(ProspEntry(cz = cz, stored_at = self._tick))
		payload = { "cz": self._render(cz), "memory": "prosp", "of": other.name }
		self._produced(record, self._log_event(EventKind.Assertion, payload, provenance = self._firing(record), refs = { "cz": cz }))

	def record_cause(self, effect: str, cause: str, record: FiringRecord):
		payload = { "effect": self._render(effect), "cause": self._render(cause) }
		event = self._produced(record, self._log_event(EventKind.CauseRecorded, payload, provenance = self._firing(record), refs = { "cz": effect, "cause": cause }))
		self._state.causes.append(CauseRecord(effect = effect, cause = cause, event_id = event.event_id))

	def select_means(self, want: str, record: FiringRecord):
		"""Own physical core first, then command a servile peer, then ask a cooperative one."""
		store = self.store
		goal = store.cz(want).obj
		if self._state.capabilities.get("can-ptrans", False):
			self.invoke_planner(goal, record)
			return
		for (attitude, mods) in ((Attitude.SERVILE, None), (Attitude.COOPERATIVE, [ Modifier.c ])):
			peers = [ name for (name, model) in sorted(self._state.conc.models.items()) if model.attitude == attitude ]
			if len(peers) > 0:
				peer = store.entity(peers[0])
				delegated = store.restate(goal, actor = peer, mods = mods)
				directive = store.assert_cz(actor = self.self_entity, act = PrimitiveAct.WANT, obj = delegated)
				self._state.directives[directive] = self._find_mconc(want)
				self.emit_intent(directive, Illocution.Directive, peer, record)
				return
		self.fail_want(want, record)

	def fail_want(self, want: str, record: FiringRecord):
		mconc = self._find_mconc(want)
		if (mconc is not None) and (mconc.status == "active"):
			self._set_want_status(mconc, "failed", self._firing(record))

	def check_prosp(self, incoming: str, source: Event, speaker: str) -> list[tuple[ProspEntry, str]]:
		updates = [ ]
		for entry in self._state.expc.prosp:
			if entry.status != "open":
				continue
			status = prosp_match(self.store, entry.cz, incoming)
			if status is None:
				continue
			entry.resolve(status)
			updates.append((entry, status))
			payload = { "status": status, "cz": self._render(entry.cz), "by": speaker }
			update = self._log_event(EventKind.ProspUpdate, payload, provenance = (source.event_id, ), refs = { "cz": entry.cz })
			mconc = self._mconc_by_id(entry.mconc)
			if (mconc is not None) and (mconc.status == "active"):
				self._set_want_status(mconc, "satisfied" if (status == "fulfilled") else "failed", (update.event_id, ))
		return updates

	def sm_simulate(self, hypothetical: str, about: str, illocution: Illocution, provenance: tuple = ()) -> list[str]:
		"""Predicts how another agent reacts on hearing the hypothetical content.

		The other agent's modeled rules run for one cycle on a scratch copy of
		the store; predicted affects and intents are copied back and logged."""
		model = self._state.conc.models.get(about)
		if model is None:
			raise NoModel("%s has no model of %s." % (self.name, about))
		scratch = self.store.copy()
		scratch_trace = Trace()
		heard = scratch_trace.append(self._tick, about, EventKind.Heard, { "speaker": self.name, "illocution": illocution.value, "cz": scratch.canonicalize(hypothetical) }, refs = { "cz": hypothetical })
		events = [ heard ]
		for entry in model.prosp:
			status = prosp_match(scratch, entry.cz, hypothetical) if (entry.status == "open") else None
			if status is not None:
				events.append(scratch_trace.append(self._tick, about, EventKind.ProspUpdate, { "status": status, "cz": scratch.canonicalize(entry.cz), "by": self.name }, provenance = (heard.event_id, ), refs = { "cz": entry.cz }))

		simulation = _Simulation(scratch, about)
		view = AgentView(name = about, store = scratch, rulebase = model.rulebase, events = events)
		for (effect, record) in fire_cycle(view, self._tick):
			effect.apply(simulation, record)
		if illocution == Illocution.Answer:
			knowledge = self._state.conc.illocutions.get(Illocution.WhyQuestion)
			if knowledge is not None:
				simulation.predict_affect(knowledge.answered, hypothetical)

		predicted = [ ]
		for (kind, node) in simulation.predicted:
			imported = self.store.import_subtree(scratch, node)
			predicted.append(imported)
			if self._trace is not None:
				self._log_event(EventKind.Prediction, { "about": about, "kind": kind, "cz": self._render(imported) }, provenance = provenance, refs = { "cz": imported })
		_log.debug("%s predicts for %s: %s", self.name, about, ", ".join(self._render(node) for node in predicted) or "nothing")
		return predicted

	def attach(self, trace: Trace, core: PhysicalCore):
		self._trace = trace
		self._core = core

	def _view(self) -> AgentView:
		state = self._state
		return AgentView(name = self.name, store = self.store, rulebase = state.conc.rulebase, events = self._events, refractory = self._refractory,
				attitudes = state.conc.attitudes, affects = state.affects, illocutions = frozenset(state.conc.illocutions),
				causes = state.causes, elaborations = state.elaborations)

	def _hear(self, message: Message):
		if not isinstance(message, Message):
			_log.warning("%s ignores malformed message %r", self.name, message)
			self._log_event(EventKind.Heard, { "speaker": None, "text": repr(message), "illocution": None })
			return
		provenance = () if (message.event_id is None) else (message.event_id, )
		payload = { "speaker": message.speaker, "text": message.text }
		try:
			recognition = self._templates.recognize(message.text, self.store, self.store.entity(message.speaker), self.self_entity)
		except (Unrecognized, AmbiguousTemplate) as e:
			_log.warning("%s did not understand %s: %s", self.name, message.speaker, e)
			payload["illocution"] = None
			event = self._log_event(EventKind.Heard, payload, provenance = provenance)
			self._state.expc.episodic.append(event.event_id)
			return
		payload.update({ "illocution": recognition.illocution.value, "template": recognition.template_id, "cz": self._render(recognition.cz_id) })
		event = self._log_event(EventKind.Heard, payload, provenance = provenance, refs = { "cz": recognition.cz_id })
		self._state.expc.episodic.append(event.event_id)
		self.check_prosp(recognition.cz_id, event, message.speaker)

	def mbuild(self, intent: Intent, tone: Optional[Tone] = None) -> Utterance:
		tone = self._state.tone if (tone is None) else tone
		realization = self._templates.realize(self.store, intent.cz, tone, self.self_entity, self.store.entity(intent.addressee))
		self._state.bf = Utterance(text = realization.text, template_id = realization.template_id, illocution = realization.illocution, cz = intent.cz, addressee = intent.addressee, intent_event = intent.event_id)
		return self._state.bf

	def mtrans_out(self, utterance: Utterance) -> Message:
		store = self.store
		content = utterance.cz
		mods = [ ]
		if Modifier.qwhy in store.cz(content).mods:
			# the question modality moves up onto the speech act itself
			content = store.restate(content, mods = store.cz(content).mods - set([ Modifier.qwhy ]))
			mods = [ Modifier.qwhy ]
		built = store.assert_cz(actor = self.self_entity, act = PrimitiveAct.MBUILD, obj = content, mods = mods)
		sent = store.assert_cz(actor = self.self_entity, act = PrimitiveAct.MTRANS, obj = content, to = store.entity(utterance.addressee), mods = mods)
		store.add_link(LinkKind.Temporal, (built, sent))
		payload = { "speaker": self.name, "addressee": utterance.addressee, "text": utterance.text, "illocution": utterance.illocution.value, "template": utterance.template_id, "cz": self._render(utterance.cz) }
		provenance = () if (utterance.intent_event is None) else (utterance.intent_event, )
		event = self._log_event(EventKind.Utterance, payload, provenance = provenance, refs = { "cz": utterance.cz })
		self._state.expc.episodic.append(event.event_id)
		self._state.bf = None
		_log.info("%s to %s: %s", self.name, utterance.addressee, utterance.text)
		return Message(speaker = self.name, addressee = utterance.addressee, text = utterance.text, illocution = utterance.illocution.value, event_id = event.event_id)

	def step(self, inbox: list, percepts: list[str], tick: int) -> StepResult:
		"""Runs one perceive / appraise / deliberate / act cycle.

		Returns the outbox, the (rule, effect) pairs applied in rule order and
		the agent's state after the step."""
		if self._trace is None:
			raise AgentError("%s is not attached to a trace." % (self.name))
		if tick <= self._state.tick:
			raise AgentError("%s: tick %d does not advance past %d." % (self.name, tick, self._state.tick))
		state = self._state
		self._tick = tick
		state.tick = tick
		self._events = [ ]
		self._intents = [ ]
		self._refractory = set()
		self._fired = 0
		self._active = False
		applied = [ ]

		state.ct_phase = "perceive"
		state.percepts = list(percepts)
		for message in inbox:
			self._hear(message)
		for mconc in state.motc:
			if (mconc.status == "active") and (mconc.origin == "intrinsic") and (not mconc.announced):
				mconc.announced = True
				self._log_event(EventKind.Motivation, { "mconc": mconc.mconc_id, "origin": mconc.origin, "cz": self._render(mconc.want) }, refs = { "cz": mconc.want })

		for cycle in range(MAX_CYCLES):
			state.ct_phase = "appraise"
			activations = fire_cycle(self._view(), tick)
			if len(activations) == 0:
				break
			state.ct_phase = "deliberate"
			for (effect, record) in activations:
				effect.apply(self, record)
				applied.append((record.rule, effect.name))
		else:
			_log.warning("%s: rule cycle limit of %d reached at tick %d.", self.name, MAX_CYCLES, tick)

		state.ct_phase = "act"
		outbox = self._act()
		self._active = (self._fired > 0) or (len(outbox) > 0)
		return StepResult(outbox = outbox, effects = applied, state = state)

	@property
	def active(self) -> bool:
		"""Whether the last step fired a rule or sent a message."""
		return self._active

	def _act(self) -> list[Message]:
		pending = self._state.deferred + self._intents
		self._state.deferred = [ ]
		outbox = [ ]
		while (len(pending) > 0) and (len(outbox) == 0):
			intent = pending.pop(0)
			try:
				utterance = self.mbuild(intent)
			except (NoTemplate, AmbiguousTemplate) as e:
				_log.warning("%s drops intent %s: %s", self.name, self._render(intent.cz), e)
				continue
			outbox.append(self.mtrans_out(utterance))
		self._state.deferred = pending
		return outbox

class _Simulation():
	"""Effect runtime for running a modeled agent's rules on a scratch store.

	Only affect onsets and intents are recorded as predictions, everything
	else the modeled rules would do is ignored."""

	def __init__(self, store: CDStore, name: str):
		self.store = store
		self._name = name
		self._affects = set()
		self.predicted = [ ]

	def predict_affect(self, state: StateName, obj: Optional[str]):
		if state in self._affects:
			return
		self._affects.add(state)
		node = self.store.assert_cz(actor = self.store.entity(self._name), act = PrimitiveAct.BE, state = state, obj = obj)
		self.predicted.append(("affect", node))

	def set_affect(self, state: StateName, active: bool, obj: Optional[str], record: FiringRecord):
		if active:
			self.predict_affect(state, obj)

	def emit_intent(self, cz: str, illocution: Illocution, addressee: EntityRef, record: FiringRecord):
		self.predicted.append(("intent", cz))

	def assert_node(self, node: str, record: FiringRecord):
		pass

	def adopt_want(self, want: str, requester: EntityRef, record: FiringRecord):
		pass

	def invoke_planner(self, goal: str, record: FiringRecord):
		pass

	def store_prosp(self, cz: str, record: FiringRecord):
		pass

	def store_model_prosp(self, other: EntityRef, cz: str, record: FiringRecord):
		pass

	def record_cause(self, effect: str, cause: str, record: FiringRecord):
		pass

	def select_means(self, want: str, record: FiringRecord):
		pass

	def fail_want(self, want: str, record: FiringRecord):
		pass
