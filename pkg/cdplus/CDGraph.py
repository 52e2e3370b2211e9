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

import re
import copy
import logging
import networkx
from dataclasses import dataclass, field
from typing import Optional, Union, TypeVar, Iterable
from .Concepts import PrimitiveAct, CONCEPTUAL_ACTS, StateName, Modifier, LinkKind
from .Exceptions import DanglingRef, LabelClash, BadObject, ModifierConflict, SelfCause, TemporalCycle, ElaborationCycle

_log = logging.getLogger(__name__)

TCDStore = TypeVar("TCDStore", bound="CDStore")

_ENTITY_RE = re.compile(r"(?P<name>[A-Za-z_][A-Za-z0-9_\-]*)(\((?P<param>[A-Za-z0-9_\-]+)\))?")

# Role order is significant: canonical forms and CDX output follow it.
ROLES = ("obj", "source", "to", "instrument")
ROLE_KEYWORDS = {
	"obj":			":obj",
	"source":		":from",
	"to":			":to",
	"instrument":	":inst",
}

@dataclass(frozen=True)
class StructureAnchor():
	anchor_id: str
	uri: Optional[str] = None
	symbol: Optional[str] = None

@dataclass(frozen=True)
class EntityRef():
	name: str
	param: Optional[str] = None
	anchor: Optional[str] = field(default = None, compare = False)

	def __post_init__(self):
		if not self.name:
			raise BadObject("Entity name must not be empty.")

	@classmethod
	def parse(cls, text: str, anchor: Optional[str] = None) -> "EntityRef":
		match = _ENTITY_RE.fullmatch(text)
		if match is None:
			raise BadObject("Not an entity symbol: %s" % (text))
		return cls(name = match["name"], param = match["param"], anchor = anchor)

	@classmethod
	def is_entity_symbol(cls, text: str) -> bool:
		return _ENTITY_RE.fullmatch(text) is not None

	def __str__(self):
		if self.param is None:
			return self.name
		return "%s(%s)" % (self.name, self.param)

@dataclass(frozen=True)
class StateConcept():
	name: StateName
	anchor: Optional[str] = field(default = None, compare = False)

	def __str__(self):
		return self.name.value

ObjectValue = Union[EntityRef, str, None]

@dataclass(frozen=True)
class Conceptualization():
	cz_id: str
	actor: EntityRef
	act: PrimitiveAct
	obj: ObjectValue = None
	source: Optional[EntityRef] = None
	to: Optional[EntityRef] = None
	instrument: Optional[EntityRef] = None
	mods: frozenset = frozenset()
	state: Optional[StateConcept] = None
	label: Optional[str] = None

	def role(self, name: str):
		return getattr(self, name)

@dataclass(frozen=True)
class LinkRecord():
	link_id: str
	kind: LinkKind
	source: Optional[str]
	target: str
	mods: frozenset = frozenset()
	entity: Optional[EntityRef] = None
	state: Optional[StateConcept] = None

	@property
	def cause(self) -> str:
		return self.source

	@property
	def effect(self) -> str:
		return self.target

	@property
	def before(self) -> str:
		return self.source

	@property
	def after(self) -> str:
		return self.target

@dataclass(frozen=True)
class Elaboration():
	symbol: str
	script: tuple

class CDStore():
	def __init__(self):
		self._entities: dict[tuple, EntityRef] = { }
		self._anchors: dict[str, StructureAnchor] = { }
		self._grounding: dict[str, str] = { }
		self._czs: dict[str, Conceptualization] = { }
		self._links: dict[str, LinkRecord] = { }
		self._labels: dict[str, str] = { }
		self._elaborations: dict[str, Elaboration] = { }
		self._temporal = networkx.DiGraph()
		self._next_cz = 1
		self._next_link = 1

	@property
	def czs(self) -> list[Conceptualization]:
		return list(self._czs.values())

	@property
	def links(self) -> list[LinkRecord]:
		return list(self._links.values())

	@property
	def anchors(self) -> list[StructureAnchor]:
		return list(self._anchors.values())

	@property
	def entities(self) -> list[EntityRef]:
		return list(self._entities.values())

	@property
	def elaborations(self) -> dict[str, Elaboration]:
		return dict(self._elaborations)

	@property
	def labels(self) -> dict[str, str]:
		return dict(self._labels)

	def __len__(self):
		return len(self._czs)

	def has(self, node_id: str) -> bool:
		return (node_id in self._czs) or (node_id in self._links)

	def is_cz(self, node_id: str) -> bool:
		return node_id in self._czs

	def is_link(self, node_id: str) -> bool:
		return node_id in self._links

	def cz(self, cz_id: str) -> Conceptualization:
		if cz_id not in self._czs:
			raise DanglingRef("No such conceptualization: %s" % (cz_id))
		return self._czs[cz_id]

	def link(self, link_id: str) -> LinkRecord:
		if link_id not in self._links:
			raise DanglingRef("No such link: %s" % (link_id))
		return self._links[link_id]

	def resolve_label(self, label: str) -> str:
		if label not in self._labels:
			raise DanglingRef("No conceptualization labelled '%s'." % (label))
		return self._labels[label]

	def entity(self, name: str, param: Optional[str] = None, anchor: Optional[str] = None) -> EntityRef:
		return self.intern(EntityRef(name = name, param = param, anchor = anchor))

	def intern(self, entity: EntityRef) -> EntityRef:
		key = (entity.name, entity.param)
		known = self._entities.get(key)
		if (known is None) or ((known.anchor is None) and (entity.anchor is not None)):
			self._entities[key] = entity
			return entity
		return known

	def add_anchor(self, anchor_id: str, uri: Optional[str] = None, symbol: Optional[str] = None) -> StructureAnchor:
		if anchor_id in self._anchors:
			raise LabelClash("Structure anchor '%s' declared twice." % (anchor_id))
		anchor = StructureAnchor(anchor_id = anchor_id, uri = uri, symbol = symbol)
		self._anchors[anchor_id] = anchor
		if symbol is not None:
			self._grounding[symbol] = anchor_id
		return anchor

	def anchor_of(self, symbol: str) -> Optional[str]:
		return self._grounding.get(symbol)

	def _check_ref(self, node_id: str):
		if not self.has(node_id):
			raise DanglingRef("Reference to unknown node %s." % (node_id))

	def _wrap_possession(self, wanter: EntityRef, thing: EntityRef) -> str:
		# "X wants ice cream" reads as "someone transfers ice cream to X"
		return self.assert_cz(actor = self.entity("Someone"), act = PrimitiveAct.PTRANS, obj = thing, to = wanter)

	def assert_cz(self, actor: EntityRef, act: PrimitiveAct, obj: ObjectValue = None, source: Optional[EntityRef] = None, to: Optional[EntityRef] = None, instrument: Optional[EntityRef] = None, mods: Iterable[Modifier] = (), state: Union[StateConcept, StateName, None] = None, label: Optional[str] = None) -> str:
		if not isinstance(act, PrimitiveAct):
			raise BadObject("Not a primitive act: %s" % (str(act)))
		actor = self.intern(actor)
		mods = Modifier.check(mods)
		if isinstance(obj, str):
			self._check_ref(obj)
			if self.is_cz(obj) and (Modifier.qwhy in self._czs[obj].mods):
				raise ModifierConflict("'qwhy' is only allowed on top-level conceptualizations.")
		if act in CONCEPTUAL_ACTS:
			if obj is None:
				raise BadObject("%s requires a conceptual object." % (act.value))
			if isinstance(obj, EntityRef):
				if act != PrimitiveAct.WANT:
					raise BadObject("%s cannot take the bare entity %s as object." % (act.value, obj))
				obj = self._wrap_possession(actor, self.intern(obj))
		elif isinstance(obj, EntityRef):
			obj = self.intern(obj)
		if isinstance(state, StateName):
			state = StateConcept(state)
		if (state is not None) and (act != PrimitiveAct.BE):
			raise BadObject("Only BE carries a state, not %s." % (act.value))
		if label is not None:
			label = str(label)
			if label in self._labels:
				raise LabelClash("Label '%s' is already used by %s." % (label, self._labels[label]))
		(source, to, instrument) = [ None if entity is None else self.intern(entity) for entity in (source, to, instrument) ]

		cz_id = "c%d" % (self._next_cz)
		self._next_cz += 1
		self._czs[cz_id] = Conceptualization(cz_id = cz_id, actor = actor, act = act, obj = obj, source = source, to = to, instrument = instrument, mods = mods, state = state, label = label)
		if label is not None:
			self._labels[label] = cz_id
		return cz_id

	def restate(self, cz_id: str, mods: Optional[Iterable[Modifier]] = None, drop: Iterable[str] = (), actor: Optional[EntityRef] = None) -> str:
		"""Copies a conceptualization with replaced modifiers (or actor) and the given roles removed."""
		cz = self.cz(cz_id)
		roles = { role: cz.role(role) for role in ROLES }
		for role in drop:
			roles[role] = None
		return self.assert_cz(actor = cz.actor if (actor is None) else actor, act = cz.act, state = cz.state, mods = cz.mods if (mods is None) else mods, **roles)

	def add_link(self, kind: LinkKind, endpoints: tuple, mods: Iterable[Modifier] = ()) -> str:
		mods = Modifier.check(mods)
		if kind == LinkKind.Causal:
			(cause, effect) = endpoints
			self._check_ref(cause)
			self._check_ref(effect)
			if cause == effect:
				raise SelfCause("%s cannot cause itself." % (cause))
			if ({ Modifier.c, Modifier.f } <= mods):
				consequent = self._czs.get(effect)
				if (consequent is None) or (consequent.state is None):
					raise BadObject("A conditional future causal link must lead to a state.")
			record = dict(source = cause, target = effect)
		elif kind == LinkKind.Temporal:
			(before, after) = endpoints
			self._check_ref(before)
			self._check_ref(after)
			if (before == after) or ((before in self._temporal) and (after in self._temporal) and networkx.has_path(self._temporal, after, before)):
				raise TemporalCycle("Temporal link %s -> %s would close a cycle." % (before, after))
			record = dict(source = before, target = after)
		elif kind == LinkKind.StateAttr:
			(entity, state, cz_id) = endpoints
			self._check_ref(cz_id)
			if isinstance(state, StateName):
				state = StateConcept(state)
			record = dict(source = None, target = cz_id, entity = self.intern(entity), state = state)
		else:
			raise BadObject("Unknown link kind %s." % (kind))

		link_id = "k%d" % (self._next_link)
		self._next_link += 1
		self._links[link_id] = LinkRecord(link_id = link_id, kind = kind, mods = mods, **record)
		if kind == LinkKind.Temporal:
			self._temporal.add_edge(record["source"], record["target"])
		return link_id

	def find_links(self, kind: Optional[LinkKind] = None, source: Optional[str] = None, target: Optional[str] = None) -> list[LinkRecord]:
		return [ link for link in self._links.values() if ((kind is None) or (link.kind == kind)) and ((source is None) or (link.source == source)) and ((target is None) or (link.target == target)) ]

	def elaborate_want(self, want_id: str) -> str:
		want = self.cz(want_id)
		if want.act != PrimitiveAct.WANT:
			raise BadObject("%s is a %s, not a WANT." % (want_id, want.act.value))
		if want.obj is None:
			raise BadObject("WANT %s has no object." % (want_id))
		pleased = self.assert_cz(actor = want.actor, act = PrimitiveAct.BE, state = StateName.Pleased, mods = [ Modifier.f ])
		causal = self.add_link(LinkKind.Causal, (want.obj, pleased), mods = [ Modifier.c, Modifier.f ])
		return self.assert_cz(actor = want.actor, act = PrimitiveAct.CONCP, obj = causal)

	def add_elaboration(self, symbol: str, script: Iterable[str]) -> Elaboration:
		script = tuple(script)
		if len(script) == 0:
			raise BadObject("Elaboration of %s has an empty script." % (symbol))
		if (PrimitiveAct.lookup(symbol) is None) and (StateName.lookup(symbol) is None):
			raise BadObject("Only acts and states can be elaborated, not %s." % (symbol))
		for step in script:
			self._check_ref(step)
		for (before, after) in zip(script, script[1:]):
			self.add_link(LinkKind.Temporal, (before, after))
		elaboration = Elaboration(symbol = symbol, script = script)
		self._elaborations[symbol] = elaboration
		return elaboration

	def _render_entity(self, entity: Optional[EntityRef]) -> str:
		return str(entity)

	def _render_mods(self, mods: frozenset) -> str:
		return "(%s)" % (" ".join(mod.value for mod in Modifier.ordered(mods)))

	def _render(self, node_id: str, ignore_mods: frozenset = frozenset(), ignore_roles: tuple = ()) -> str:
		if self.is_link(node_id):
			link = self._links[node_id]
			if link.kind == LinkKind.StateAttr:
				parts = [ "state-attr", str(link.entity), str(link.state), self._render(link.target) ]
			else:
				parts = [ link.kind.value, self._render(link.source), self._render(link.target) ]
			if len(link.mods) > 0:
				parts += [ ":mods", self._render_mods(link.mods) ]
			return "(%s)" % (" ".join(parts))

		cz = self.cz(node_id)
		parts = [ "cz", ":actor", str(cz.actor), ":act", cz.act.value ]
		for role in ROLES:
			value = cz.role(role)
			if (value is None) or (role in ignore_roles):
				continue
			parts.append(ROLE_KEYWORDS[role])
			parts.append(self._render(value) if isinstance(value, str) else str(value))
		if cz.state is not None:
			parts += [ ":state", str(cz.state) ]
		mods = cz.mods - ignore_mods
		if len(mods) > 0:
			parts += [ ":mods", self._render_mods(mods) ]
		return "(%s)" % (" ".join(parts))

	def canonicalize(self, root: str) -> str:
		self._check_ref(root)
		return self._render(root)

	def canonical_core(self, root: str, ignore_mods: Iterable[Modifier] = (), ignore_roles: Iterable[str] = ()) -> str:
		"""Canonical form of root with top-level modality and the given roles disregarded."""
		self._check_ref(root)
		return self._render(root, ignore_mods = frozenset(ignore_mods), ignore_roles = tuple(ignore_roles))

	def children(self, node_id: str) -> list[str]:
		if self.is_link(node_id):
			link = self._links[node_id]
			return [ node for node in (link.source, link.target) if node is not None ]
		return [ self.cz(node_id).obj ] if isinstance(self.cz(node_id).obj, str) else [ ]

	def symbols_of(self, root: str) -> list[str]:
		symbols = [ ]
		def visit(node_id):
			if self.is_cz(node_id):
				cz = self._czs[node_id]
				symbols.append(cz.act.value)
				if cz.state is not None:
					symbols.append(cz.state.name.value)
			else:
				link = self.link(node_id)
				if link.state is not None:
					symbols.append(link.state.name.value)
			for child in self.children(node_id):
				visit(child)
		visit(root)
		return list(dict.fromkeys(symbols))

	def ground_check(self, root: str, elaborations: Optional[dict[str, Elaboration]] = None) -> list[str]:
		self._check_ref(root)
		if elaborations is None:
			elaborations = self._elaborations
		ungrounded = [ ]
		finished = set()

		def visit(symbol: str, stack: tuple):
			if symbol in stack:
				raise ElaborationCycle("Elaboration of %s reaches itself via %s." % (symbol, " -> ".join(stack + (symbol, ))))
			if symbol in finished:
				return
			elaboration = elaborations.get(symbol)
			if elaboration is not None:
				for step in elaboration.script:
					for sub_symbol in self.symbols_of(step):
						visit(sub_symbol, stack + (symbol, ))
			elif self.anchor_of(symbol) is None:
				ungrounded.append(symbol)
			finished.add(symbol)

		for symbol in self.symbols_of(root):
			visit(symbol, ())
		return ungrounded

	def import_subtree(self, other: TCDStore, root: str) -> str:
		"""Copies the subtree at root of another store into this one, returning the new id."""
		if other.is_link(root):
			link = other.link(root)
			if link.kind == LinkKind.StateAttr:
				return self.add_link(link.kind, (link.entity, link.state, self.import_subtree(other, link.target)), mods = link.mods)
			return self.add_link(link.kind, (self.import_subtree(other, link.source), self.import_subtree(other, link.target)), mods = link.mods)
		cz = other.cz(root)
		obj = self.import_subtree(other, cz.obj) if isinstance(cz.obj, str) else cz.obj
		return self.assert_cz(actor = cz.actor, act = cz.act, obj = obj, source = cz.source, to = cz.to, instrument = cz.instrument, mods = cz.mods, state = cz.state)

	def copy(self) -> TCDStore:
		return copy.deepcopy(self)

	def dump(self, prefix = ""):
		for cz in self._czs.values():
			label = "" if cz.label is None else " #%s" % (cz.label)
			print("%s%-5s%s %s" % (prefix, cz.cz_id, label, self.canonicalize(cz.cz_id)))
		for link in self._links.values():
			print("%s%-5s %s" % (prefix, link.link_id, self.canonicalize(link.link_id)))

	def __str__(self):
		return "CDStore<%d conceptualizations, %d links>" % (len(self._czs), len(self._links))
