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
from typing import Optional, Union, Iterator, Type, TypeVar
from .CDGraph import CDStore, EntityRef
from .CDXFormat import CdxDocument, SAtom, SList, parse_file, data_path
from .Concepts import StateName, Modifier, LinkKind, Attitude, Illocution, EventKind, Sort
from .Matcher import Pattern, Variable, Bindings, unify, substitute, bind_variable
from .Trace import Event
from .Exceptions import CDPlusError, RuleSyntaxError, DuplicateRuleName, UnboundEffectVariable

_log = logging.getLogger(__name__)

TGuard = TypeVar("TGuard", bound="Guard")
TEffect = TypeVar("TEffect", bound="Effect")

# Event attributes that refer to store nodes rather than to agents
REF_ATTRIBUTES = frozenset([ "cz", "goal", "unsatisfied", "want", "cause" ])

@dataclass(frozen=True)
class CauseRecord():
	effect: str
	cause: str
	event_id: int

@dataclass
class AgentView():
	"""What rules may look at: one agent's store, step events and mental state."""
	name: str
	store: CDStore
	rulebase: "Rulebase"
	events: list = field(default_factory = list)
	refractory: set = field(default_factory = set)
	attitudes: dict = field(default_factory = dict)
	affects: dict = field(default_factory = dict)
	illocutions: frozenset = frozenset()
	causes: list = field(default_factory = list)
	elaborations: dict = field(default_factory = dict)

	@property
	def self_entity(self) -> EntityRef:
		return self.store.entity(self.name)

@dataclass
class FiringRecord():
	tick: int
	rule: str
	clause: int
	bindings: Bindings
	triggers: tuple
	produced: list = field(default_factory = list)
	event_id: Optional[int] = None

	def serialize(self, store: CDStore) -> dict:
		return {
			"rule":			self.rule,
			"clause":		self.clause,
			"bindings":		{ name: rendered for (name, rendered) in self.bindings.canonical(store) },
		}

def _variable_name(node, context: SList) -> str:
	if not (isinstance(node, SAtom) and node.is_variable):
		position = context if (node is None) else node
		raise RuleSyntaxError("%d:%d: Expected a variable." % (position.line, position.col))
	return node.value[1:]

def _symbols(nodes: list, context: SList) -> list[str]:
	for node in nodes:
		if not isinstance(node, SAtom):
			raise RuleSyntaxError("%d:%d: Expected a symbol." % (node.line, node.col))
	return [ str(node.value) for node in nodes ]

def _lookup(enum_class, name: str, context: SList):
	value = enum_class.lookup(name)
	if value is None:
		raise RuleSyntaxError("%d:%d: Unknown %s '%s'." % (context.line, context.col, enum_class.__name__, name))
	return value

class Term():
	"""Right-hand side expression that evaluates to a store node."""

	def __init__(self, form: Union[SAtom, SList], sorts: dict[str, Sort]):
		self._form = form
		self._uses = set()
		if isinstance(form, SAtom):
			self._kind = "variable"
			self._name = _variable_name(form, form)
			self._uses.add(self._name)
		elif form.head == "elaboration-of":
			self._kind = "elaboration"
			if len(form.items) != 2:
				raise RuleSyntaxError("%d:%d: elaboration-of takes one variable." % (form.line, form.col))
			self._name = _variable_name(form.items[1], form)
			self._uses.add(self._name)
		elif form.head == "with-mods":
			self._kind = "with-mods"
			(positional, keywords) = form.split()
			if (len(positional) != 2) or (not isinstance(positional[1], SList)):
				raise RuleSyntaxError("%d:%d: with-mods takes a term and a modifier list." % (form.line, form.col))
			self._inner = Term(positional[0], sorts)
			self._mods = [ _lookup(Modifier, name, form) for name in _symbols(positional[1].items, form) ]
			self._drop = [ ]
			if ":drop" in keywords:
				self._drop = [ self._role(name, form) for name in _symbols(keywords[":drop"].items, form) ]
			self._uses |= self._inner.uses
		else:
			self._kind = "pattern"
			try:
				self._pattern = Pattern.from_sexpr(form, sorts = sorts)
			except CDPlusError as e:
				raise RuleSyntaxError("%d:%d: %s" % (form.line, form.col, e)) from e
			self._uses |= set(self._pattern.variables)

	@staticmethod
	def _role(name: str, form: SList) -> str:
		roles = { "obj": "obj", "from": "source", "to": "to", "inst": "instrument" }
		if name not in roles:
			raise RuleSyntaxError("%d:%d: Unknown role '%s'." % (form.line, form.col, name))
		return roles[name]

	@property
	def uses(self) -> set[str]:
		return set(self._uses)

	def evaluate(self, store: CDStore, bindings: Bindings) -> str:
		if self._kind == "variable":
			return bindings[self._name]
		elif self._kind == "elaboration":
			return store.elaborate_want(bindings[self._name])
		elif self._kind == "with-mods":
			return store.restate(self._inner.evaluate(store, bindings), mods = self._mods, drop = self._drop)
		return substitute(self._pattern, bindings, store)

	@property
	def creates_node(self) -> bool:
		return self._kind != "variable"

	def __str__(self):
		return self._form.flat()

class Trigger():
	def __init__(self, form: SList, sorts: dict[str, Sort]):
		if (len(form.items) < 2) or (not isinstance(form.items[1], SAtom)):
			raise RuleSyntaxError("%d:%d: 'on' needs an event kind." % (form.line, form.col))
		self._kind = _lookup(EventKind, form.items[1].value, form)
		(positional, keywords) = form.split(start = 2)
		if len(positional) > 0:
			raise RuleSyntaxError("%d:%d: Unexpected trigger argument %s." % (form.line, form.col, positional[0].flat()))
		self._cz_var = None
		self._pattern = None
		self._attributes = { }
		for (keyword, value) in keywords.items():
			key = keyword[1:]
			if key == "cz":
				self._cz_var = _variable_name(value, form)
				sorts.setdefault(self._cz_var, Sort.Cz)
			elif key == "match":
				try:
					self._pattern = Pattern.from_sexpr(value, sorts = sorts)
				except CDPlusError as e:
					raise RuleSyntaxError("%d:%d: %s" % (value.line, value.col, e)) from e
				sorts.update(self._pattern.variables)
			elif isinstance(value, SAtom) and value.is_variable:
				name = value.value[1:]
				sorts.setdefault(name, Sort.Cz if (key in REF_ATTRIBUTES) else Sort.Entity)
				self._attributes[key] = Variable(name = name, sort = sorts[name])
			elif isinstance(value, SAtom):
				self._attributes[key] = str(value.value)
			else:
				raise RuleSyntaxError("%d:%d: Trigger attribute %s must be a symbol or variable." % (value.line, value.col, keyword))

	@property
	def kind(self) -> EventKind:
		return self._kind

	@property
	def binds(self) -> set[str]:
		names = set(variable.name for variable in self._attributes.values() if isinstance(variable, Variable))
		if self._cz_var is not None:
			names.add(self._cz_var)
		if self._pattern is not None:
			names |= set(self._pattern.variables)
		return names

	def match(self, view: AgentView, event: Event, bindings: Bindings) -> Optional[Bindings]:
		if event.kind != self._kind:
			return None
		if (self._cz_var is not None) or (self._pattern is not None):
			node = event.ref("cz")
			if node is None:
				return None
			if self._cz_var is not None:
				bindings = bind_variable(Variable(self._cz_var, Sort.Cz), node, view.store, bindings)
			if (bindings is not None) and (self._pattern is not None):
				bindings = unify(self._pattern, view.store, node, bindings)
			if bindings is None:
				return None
		for (key, expected) in self._attributes.items():
			if isinstance(expected, Variable):
				if key in event.refs:
					value = event.refs[key]
				elif isinstance(event.payload.get(key), str) and EntityRef.is_entity_symbol(event.payload[key]):
					value = view.store.intern(EntityRef.parse(event.payload[key]))
				else:
					return None
				bindings = bind_variable(expected, value, view.store, bindings)
				if bindings is None:
					return None
			elif str(event.payload.get(key)) != expected:
				return None
		return bindings

class Guard():
	_HANDLERS: dict[str, Type[TGuard]] = { }
	_NAME = None

	def __init__(self, form: SList, sorts: dict[str, Sort]):
		self._form = form
		self._args = form.items[1:]
		self._uses = set()
		self._binds = set()
		self.setup(sorts)

	@classmethod
	def register(cls, guard_class: Type[TGuard]) -> Type[TGuard]:
		cls._HANDLERS[guard_class._NAME] = guard_class
		return guard_class

	@classmethod
	def parse(cls, form: SList, sorts: dict[str, Sort]) -> TGuard:
		if (not isinstance(form, SList)) or (form.head not in cls._HANDLERS):
			raise RuleSyntaxError("%d:%d: Unknown guard %s." % (form.line, form.col, form.flat()))
		return cls._HANDLERS[form.head](form, sorts)

	def _arity(self, minimum: int, maximum: Optional[int] = None):
		maximum = minimum if (maximum is None) else maximum
		if not (minimum <= len(self._args) <= (maximum or len(self._args))):
			raise RuleSyntaxError("%d:%d: Wrong number of arguments to %s." % (self._form.line, self._form.col, self._NAME))

	def _use(self, index: int) -> str:
		name = _variable_name(self._args[index], self._form)
		self._uses.add(name)
		return name

	def _bind(self, index: int, sort: Sort, sorts: dict[str, Sort]) -> str:
		name = _variable_name(self._args[index], self._form)
		sorts.setdefault(name, sort)
		self._binds.add(name)
		return name

	@property
	def uses(self) -> set[str]:
		return set(self._uses)

	@property
	def binds(self) -> set[str]:
		return set(self._binds)

	def setup(self, sorts: dict[str, Sort]):
		raise NotImplementedError()

	def solve(self, view: AgentView, bindings: Bindings) -> Iterator[tuple[Bindings, tuple]]:
		"""Yields extended bindings together with the ids of the events supporting them."""
		raise NotImplementedError()

	def __str__(self):
		return self._form.flat()

@Guard.register
class ElaboratedGuard(Guard):
	_NAME = "elaborated"

	def setup(self, sorts: dict[str, Sort]):
		self._arity(2)
		self._want = self._use(0)
		self._elaboration = self._bind(1, Sort.Cz, sorts)

	def solve(self, view: AgentView, bindings: Bindings) -> Iterator[tuple[Bindings, tuple]]:
		if bindings[self._want] in view.elaborations:
			(node, event_id) = view.elaborations[bindings[self._want]]
			extended = bind_variable(Variable(self._elaboration, Sort.Cz), node, view.store, bindings)
			if extended is not None:
				yield (extended, (event_id, ))

@Guard.register
class AttitudeTowardGuard(Guard):
	_NAME = "attitude-toward"

	def setup(self, sorts: dict[str, Sort]):
		self._arity(2, 0)
		self._other = self._use(0)
		self._accepted = frozenset(_lookup(Attitude, name, self._form) for name in _symbols(self._args[1:], self._form))

	def solve(self, view: AgentView, bindings: Bindings) -> Iterator[tuple[Bindings, tuple]]:
		if view.attitudes.get(bindings[self._other].name) in self._accepted:
			yield (bindings, ())

@Guard.register
class ActorIsGuard(Guard):
	_NAME = "actor-is"

	def setup(self, sorts: dict[str, Sort]):
		self._arity(2)
		self._node = self._use(0)
		self._actor = _variable_name(self._args[1], self._form)
		sorts.setdefault(self._actor, Sort.Entity)
		self._binds.add(self._actor)

	def solve(self, view: AgentView, bindings: Bindings) -> Iterator[tuple[Bindings, tuple]]:
		node = bindings[self._node]
		if view.store.is_cz(node):
			extended = bind_variable(Variable(self._actor, Sort.Entity), view.store.cz(node).actor, view.store, bindings)
			if extended is not None:
				yield (extended, ())

@Guard.register
class CausesPleasedGuard(Guard):
	_NAME = "causes-pleased"

	def setup(self, sorts: dict[str, Sort]):
		self._arity(2)
		self._cause = self._use(0)
		self._beneficiary = self._use(1)

	def solve(self, view: AgentView, bindings: Bindings) -> Iterator[tuple[Bindings, tuple]]:
		store = view.store
		cause = store.canonicalize(bindings[self._cause])
		for link in store.find_links(kind = LinkKind.Causal):
			if store.canonicalize(link.cause) != cause:
				continue
			effect = store.cz(link.effect) if store.is_cz(link.effect) else None
			if (effect is not None) and (effect.state is not None) and (effect.state.name == StateName.Pleased) and (effect.actor == bindings[self._beneficiary]):
				yield (bindings, ())
				return

@Guard.register
class HasModsGuard(Guard):
	_NAME = "has-mods"

	def setup(self, sorts: dict[str, Sort]):
		self._arity(1, 0)
		self._node = self._use(0)
		self._mods = frozenset(_lookup(Modifier, name, self._form) for name in _symbols(self._args[1:], self._form))

	def solve(self, view: AgentView, bindings: Bindings) -> Iterator[tuple[Bindings, tuple]]:
		node = bindings[self._node]
		if view.store.is_cz(node) and (self._mods <= view.store.cz(node).mods):
			yield (bindings, ())

@Guard.register
class AffectActiveGuard(Guard):
	"""Holds while any one of the listed affects is active."""
	_NAME = "affect-active"

	def setup(self, sorts: dict[str, Sort]):
		self._arity(1, 0)
		self._states = [ _lookup(StateName, name, self._form) for name in _symbols(self._args, self._form) ]

	def solve(self, view: AgentView, bindings: Bindings) -> Iterator[tuple[Bindings, tuple]]:
		if any(state in view.affects for state in self._states):
			yield (bindings, ())

@Guard.register
class KnowsIllocutionGuard(Guard):
	_NAME = "knows-illocution"

	def setup(self, sorts: dict[str, Sort]):
		self._arity(1)
		self._illocution = _lookup(Illocution, _symbols(self._args, self._form)[0], self._form)

	def solve(self, view: AgentView, bindings: Bindings) -> Iterator[tuple[Bindings, tuple]]:
		if self._illocution in view.illocutions:
			yield (bindings, ())

@Guard.register
class RecordedCauseGuard(Guard):
	_NAME = "recorded-cause"

	def setup(self, sorts: dict[str, Sort]):
		self._arity(2)
		self._question = self._use(0)
		self._cause = self._bind(1, Sort.Cz, sorts)

	def solve(self, view: AgentView, bindings: Bindings) -> Iterator[tuple[Bindings, tuple]]:
		store = view.store
		# A why-question names the act without its source and with its own modality
		ignore = dict(ignore_mods = list(Modifier), ignore_roles = ("source", ))
		asked = store.canonical_core(bindings[self._question], **ignore)
		for record in view.causes:
			if store.canonical_core(record.effect, **ignore) == asked:
				extended = bind_variable(Variable(self._cause, Sort.Cz), record.cause, store, bindings)
				if extended is not None:
					yield (extended, (record.event_id, ))

class Effect():
	_HANDLERS: dict[str, Type[TEffect]] = { }
	_NAME = None

	def __init__(self, form: SList, sorts: dict[str, Sort]):
		self._form = form
		(self._positional, self._keywords) = form.split()
		self._uses = set()
		self._as = None
		if ":as" in self._keywords:
			self._as = _variable_name(self._keywords[":as"], form)
			sorts[self._as] = Sort.Cz
		self.setup(sorts)

	@classmethod
	def register(cls, effect_class: Type[TEffect]) -> Type[TEffect]:
		cls._HANDLERS[effect_class._NAME] = effect_class
		return effect_class

	@classmethod
	def parse(cls, form: SList, sorts: dict[str, Sort]) -> TEffect:
		if (not isinstance(form, SList)) or (form.head not in cls._HANDLERS):
			raise RuleSyntaxError("%d:%d: Unknown effect %s." % (form.line, form.col, form.flat()))
		return cls._HANDLERS[form.head](form, sorts)

	@property
	def name(self) -> str:
		return self._NAME

	@property
	def uses(self) -> set[str]:
		return set(self._uses)

	@property
	def binds(self) -> set[str]:
		return set() if (self._as is None) else set([ self._as ])

	def _term(self, index: int, sorts: dict[str, Sort]) -> Term:
		if index >= len(self._positional):
			raise RuleSyntaxError("%d:%d: %s is missing an argument." % (self._form.line, self._form.col, self._NAME))
		term = Term(self._positional[index], sorts)
		self._uses |= term.uses
		return term

	def _variable(self, node, sort: Sort, sorts: dict[str, Sort]) -> str:
		name = _variable_name(node, self._form)
		sorts.setdefault(name, sort)
		self._uses.add(name)
		return name

	def _keyword(self, keyword: str):
		if keyword not in self._keywords:
			raise RuleSyntaxError("%d:%d: %s requires %s." % (self._form.line, self._form.col, self._NAME, keyword))
		return self._keywords[keyword]

	def _name_result(self, record: FiringRecord, node: str):
		if self._as is not None:
			record.bindings[self._as] = node

	def setup(self, sorts: dict[str, Sort]):
		raise NotImplementedError()

	def apply(self, runtime, record: FiringRecord):
		raise NotImplementedError()

	def __str__(self):
		return self._form.flat()

@Effect.register
class AssertCz(Effect):
	_NAME = "assert-cz"

	def setup(self, sorts: dict[str, Sort]):
		self.term = self._term(0, sorts)

	def apply(self, runtime, record: FiringRecord):
		node = self.term.evaluate(runtime.store, record.bindings)
		runtime.assert_node(node, record)
		self._name_result(record, node)

@Effect.register
class SetAffect(Effect):
	_NAME = "set-affect"

	def setup(self, sorts: dict[str, Sort]):
		if (len(self._positional) < 2) or (not all(isinstance(node, SAtom) for node in self._positional[:2])):
			raise RuleSyntaxError("%d:%d: set-affect takes a state and on/off." % (self._form.line, self._form.col))
		self.state = _lookup(StateName, self._positional[0].value, self._form)
		if self._positional[1].value not in ("on", "off"):
			raise RuleSyntaxError("%d:%d: set-affect switch must be 'on' or 'off'." % (self._form.line, self._form.col))
		self.active = (self._positional[1].value == "on")
		self.term = self._term(2, sorts) if self.active else None

	def apply(self, runtime, record: FiringRecord):
		node = None if (self.term is None) else self.term.evaluate(runtime.store, record.bindings)
		runtime.set_affect(self.state, self.active, node, record)

@Effect.register
class AdoptWant(Effect):
	_NAME = "adopt-want"

	def setup(self, sorts: dict[str, Sort]):
		self.term = self._term(0, sorts)
		self.requester = self._variable(self._keyword(":from"), Sort.Entity, sorts)

	def apply(self, runtime, record: FiringRecord):
		runtime.adopt_want(self.term.evaluate(runtime.store, record.bindings), record.bindings[self.requester], record)

@Effect.register
class InvokePlanner(Effect):
	_NAME = "invoke-planner"

	def setup(self, sorts: dict[str, Sort]):
		self.term = self._term(0, sorts)

	def apply(self, runtime, record: FiringRecord):
		runtime.invoke_planner(self.term.evaluate(runtime.store, record.bindings), record)

@Effect.register
class EmitUtteranceIntent(Effect):
	_NAME = "emit-intent"

	def setup(self, sorts: dict[str, Sort]):
		self.term = self._term(0, sorts)
		self.illocution = _lookup(Illocution, str(self._keyword(":illocution").value), self._form)
		self.addressee = self._variable(self._keyword(":to"), Sort.Entity, sorts)

	def apply(self, runtime, record: FiringRecord):
		node = self.term.evaluate(runtime.store, record.bindings)
		runtime.emit_intent(node, self.illocution, record.bindings[self.addressee], record)
		self._name_result(record, node)

@Effect.register
class StorePROSP(Effect):
	_NAME = "store-prosp"

	def setup(self, sorts: dict[str, Sort]):
		self.term = self._term(0, sorts)

	def apply(self, runtime, record: FiringRecord):
		runtime.store_prosp(self.term.evaluate(runtime.store, record.bindings), record)

@Effect.register
class StoreModelPROSP(Effect):
	_NAME = "model-prosp"

	def setup(self, sorts: dict[str, Sort]):
		self.other = self._variable(self._positional[0] if (len(self._positional) > 0) else None, Sort.Entity, sorts)
		self.term = self._term(1, sorts)

	def apply(self, runtime, record: FiringRecord):
		runtime.store_model_prosp(record.bindings[self.other], self.term.evaluate(runtime.store, record.bindings), record)

@Effect.register
class AnswerWhy(Effect):
	_NAME = "answer-why"

	def setup(self, sorts: dict[str, Sort]):
		self.cause = self._variable(self._positional[0] if (len(self._positional) > 0) else None, Sort.Cz, sorts)
		self.asker = self._variable(self._keyword(":to"), Sort.Entity, sorts)

	def apply(self, runtime, record: FiringRecord):
		runtime.emit_intent(record.bindings[self.cause], Illocution.Answer, record.bindings[self.asker], record)

@Effect.register
class RecordCause(Effect):
	_NAME = "record-cause"

	def setup(self, sorts: dict[str, Sort]):
		self.effect = self._variable(self._positional[0] if (len(self._positional) > 0) else None, Sort.Cz, sorts)
		self.term = self._term(1, sorts)

	def apply(self, runtime, record: FiringRecord):
		runtime.record_cause(record.bindings[self.effect], self.term.evaluate(runtime.store, record.bindings), record)

@Effect.register
class SelectMeans(Effect):
	"""Chooses how an own want gets pursued; resolved when the rule fires."""
	_NAME = "select-means"

	def setup(self, sorts: dict[str, Sort]):
		self.want = self._variable(self._positional[0] if (len(self._positional) > 0) else None, Sort.Cz, sorts)

	def apply(self, runtime, record: FiringRecord):
		runtime.select_means(record.bindings[self.want], record)

@Effect.register
class FailWant(Effect):
	_NAME = "fail-want"

	def setup(self, sorts: dict[str, Sort]):
		self.want = self._variable(self._positional[0] if (len(self._positional) > 0) else None, Sort.Cz, sorts)

	def apply(self, runtime, record: FiringRecord):
		runtime.fail_want(record.bindings[self.want], record)

class Clause():
	def __init__(self, trigger: Trigger, guards: list[Guard], effects: list[Effect]):
		self._trigger = trigger
		self._guards = guards
		self._effects = effects

	@classmethod
	def from_sexpr(cls, parts: list, context: SList, rule_name: str) -> "Clause":
		sections = { }
		for part in parts:
			if (not isinstance(part, SList)) or (part.head not in ("on", "when", "do")) or (part.head in sections):
				raise RuleSyntaxError("%d:%d: Rule %s: expected one each of (on ...), (when ...), (do ...)." % (part.line, part.col, rule_name))
			sections[part.head] = part
		if ("on" not in sections) or ("do" not in sections):
			raise RuleSyntaxError("%d:%d: Rule %s needs a trigger and effects." % (context.line, context.col, rule_name))

		sorts = { "self": Sort.Entity }
		trigger = Trigger(sections["on"], sorts)
		bound = set([ "self" ]) | trigger.binds
		guards = [ ]
		for form in (sections["when"].items[1:] if ("when" in sections) else [ ]):
			guard = Guard.parse(form, sorts)
			if not (guard.uses <= bound):
				raise RuleSyntaxError("%d:%d: Rule %s: guard %s uses unbound %s." % (form.line, form.col, rule_name, form.head, ", ".join(sorted(guard.uses - bound))))
			bound |= guard.binds
			guards.append(guard)
		effects = [ ]
		for form in sections["do"].items[1:]:
			effect = Effect.parse(form, sorts)
			if not (effect.uses <= bound):
				raise UnboundEffectVariable("%d:%d: Rule %s: effect %s uses unbound %s." % (form.line, form.col, rule_name, effect.name, ", ".join("?" + name for name in sorted(effect.uses - bound))))
			bound |= effect.binds
			effects.append(effect)
		return cls(trigger, guards, effects)

	@property
	def trigger(self) -> Trigger:
		return self._trigger

	@property
	def guards(self) -> list[Guard]:
		return list(self._guards)

	@property
	def effects(self) -> list[Effect]:
		return list(self._effects)

	def solve(self, view: AgentView, bindings: Bindings, index: int = 0, support: tuple = ()) -> Iterator[tuple[Bindings, tuple]]:
		if index == len(self._guards):
			yield (bindings, support)
			return
		for (extended, events) in self._guards[index].solve(view, bindings):
			yield from self.solve(view, extended, index + 1, support + events)

class Rule():
	def __init__(self, name: str, priority: int, clauses: list[Clause]):
		self._name = name
		self._priority = priority
		self._clauses = clauses

	@classmethod
	def from_sexpr(cls, form: SList) -> "Rule":
		(positional, keywords) = form.split()
		if (len(positional) < 2) or (not isinstance(positional[0], SAtom)):
			raise RuleSyntaxError("%d:%d: A rule needs a name and a body." % (form.line, form.col))
		name = str(positional[0].value)
		priority = keywords.get(":priority")
		if (priority is None) or (priority.kind != "int"):
			raise RuleSyntaxError("%d:%d: Rule %s needs an integer :priority." % (form.line, form.col, name))
		body = positional[1:]
		if all(isinstance(part, SList) and (part.head == "clause") for part in body):
			clauses = [ Clause.from_sexpr(part.items[1:], part, name) for part in body ]
		else:
			clauses = [ Clause.from_sexpr(body, form, name) ]
		return cls(name, priority.value, clauses)

	@property
	def name(self) -> str:
		return self._name

	@property
	def priority(self) -> int:
		return self._priority

	@property
	def clauses(self) -> list[Clause]:
		return list(self._clauses)

	@property
	def sort_key(self) -> tuple:
		return (self._priority, self._name)

	def __str__(self):
		return "Rule<%s, prio %d, %d clause(s)>" % (self._name, self._priority, len(self._clauses))

class Rulebase():
	def __init__(self, rules: Optional[list[Rule]] = None):
		self._rules: dict[str, Rule] = { }
		for rule in (rules or [ ]):
			self.add(rule)

	@classmethod
	def from_document(cls, doc: CdxDocument) -> "Rulebase":
		return cls([ Rule.from_sexpr(form) for form in doc.sections("rule") ])

	@classmethod
	def from_file(cls, filename: str) -> "Rulebase":
		return cls.from_document(parse_file(filename))

	@classmethod
	def default(cls) -> "Rulebase":
		return cls.from_file(data_path("rules", "builtin.cdx"))

	def add(self, rule: Rule):
		if rule.name in self._rules:
			raise DuplicateRuleName("Rule %s is defined more than once." % (rule.name))
		self._rules[rule.name] = rule

	def extend(self, other: "Rulebase") -> "Rulebase":
		return Rulebase(self.rules + other.rules)

	def subset(self, names: list[str]) -> "Rulebase":
		unknown = [ name for name in names if name not in self._rules ]
		if len(unknown) > 0:
			raise RuleSyntaxError("Unknown rule(s) %s." % (", ".join(unknown)))
		return Rulebase([ self._rules[name] for name in names ])

	def rule(self, name: str) -> Rule:
		return self._rules[name]

	@property
	def rules(self) -> list[Rule]:
		return sorted(self._rules.values(), key = lambda rule: rule.sort_key)

	@property
	def names(self) -> list[str]:
		return [ rule.name for rule in self.rules ]

	def __contains__(self, name: str):
		return name in self._rules

	def __len__(self):
		return len(self._rules)

def load_rulebase(doc: CdxDocument) -> Rulebase:
	return Rulebase.from_document(doc)

def fire_cycle(view: AgentView, tick: int) -> list[tuple[Effect, FiringRecord]]:
	"""Matches all rules against the view; records firings as refractory but applies nothing."""
	activations = [ ]
	for rule in view.rulebase.rules:
		for (index, clause) in enumerate(rule.clauses):
			for event in view.events:
				bindings = clause.trigger.match(view, event, Bindings({ "self": view.self_entity }))
				if bindings is None:
					continue
				for (solution, support) in clause.solve(view, bindings):
					key = (rule.name, solution.canonical(view.store))
					if key in view.refractory:
						continue
					view.refractory.add(key)
					triggers = tuple(dict.fromkeys(support + (event.event_id, )))
					record = FiringRecord(tick = tick, rule = rule.name, clause = index, bindings = Bindings(solution), triggers = triggers)
					_log.debug("%s fires %s on event #%d", view.name, rule.name, event.event_id)
					for effect in clause.effects:
						activations.append((effect, record))
	return activations
