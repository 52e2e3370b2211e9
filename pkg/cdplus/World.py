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

import copy
import logging
import collections
from dataclasses import dataclass, field
from typing import Optional, Union, Iterable
from .CDGraph import CDStore, EntityRef
from .CDXFormat import SAtom, SList
from .Concepts import PrimitiveAct, Modifier
from .Exceptions import WorldError, MalformedGoal, PreconditionViolated

_log = logging.getLogger(__name__)

@dataclass(frozen=True, order=True)
class Action():
	"""A PTRANS of an entity between two locations by an agent."""
	agent: str
	entity: str
	source: str
	destination: str

	def as_cz(self, store: CDStore, world: "WorldState", mods: Iterable[Modifier] = ()) -> str:
		recipient = world.resident_of(self.destination)
		to = store.entity(recipient) if (recipient is not None) else store.entity(self.destination)
		return store.assert_cz(actor = store.entity(self.agent), act = PrimitiveAct.PTRANS, obj = EntityRef.parse(self.entity), source = store.entity(self.source), to = to, mods = mods)

	def __str__(self):
		return "PTRANS(%s, %s, %s, %s)" % (self.agent, self.entity, self.source, self.destination)

@dataclass(frozen=True)
class Plan():
	steps: tuple = ()

	@property
	def success(self) -> bool:
		return True

	def __len__(self):
		return len(self.steps)

@dataclass(frozen=True)
class Failure():
	unsatisfied: str
	at_depth: int

	@property
	def success(self) -> bool:
		return False

PlanResult = Union[Plan, Failure]

@dataclass
class WorldState():
	locations: tuple = ()
	at: dict = field(default_factory = dict)
	holding: dict = field(default_factory = dict)
	homes: dict = field(default_factory = dict)
	reach: dict = field(default_factory = dict)

	@classmethod
	def from_sexpr(cls, section: SList) -> "WorldState":
		world = cls()
		locations = [ ]
		for form in section.items[1:]:
			if (not isinstance(form, SList)) or (not all(isinstance(item, SAtom) for item in form.items)):
				raise WorldError("%d:%d: Malformed world entry." % (form.line, form.col))
			args = [ str(item.value) for item in form.items[1:] ]
			if (form.head == "location") and (len(args) >= 1):
				locations += args
			elif (form.head == "home") and (len(args) == 2):
				world.homes[args[0]] = args[1]
				world.holding.setdefault(args[0], set())
			elif (form.head == "at") and (len(args) == 2):
				world.at[str(EntityRef.parse(args[0]))] = args[1]
			elif (form.head == "holding") and (len(args) == 2):
				world.holding.setdefault(args[0], set()).add(str(EntityRef.parse(args[1])))
			elif (form.head == "reach") and (len(args) >= 1):
				world.reach[args[0]] = frozenset(args[1:])
			else:
				raise WorldError("%d:%d: Unknown world entry '%s'." % (form.line, form.col, form.flat()))
		world.locations = tuple(sorted(set(locations)))
		world.check()
		return world

	def check(self):
		known = set(self.locations)
		places = list(self.at.values()) + list(self.homes.values()) + [ location for reach in self.reach.values() for location in reach ]
		for place in places:
			if place not in known:
				raise WorldError("Unknown location '%s'." % (place))
		held = [ entity for entities in self.holding.values() for entity in entities ]
		if (len(held) != len(set(held))) or (len(set(held) & set(self.at)) > 0):
			raise WorldError("Every entity must have exactly one location or holder.")
		for holder in self.holding:
			if holder not in self.homes:
				raise WorldError("Holder %s has no home location." % (holder))

	@property
	def entities(self) -> list[str]:
		return sorted(set(self.at) | set(entity for entities in self.holding.values() for entity in entities))

	def resident_of(self, location: str) -> Optional[str]:
		for (agent, home) in sorted(self.homes.items()):
			if home == location:
				return agent
		return None

	def holder_of(self, entity: str) -> Optional[str]:
		for (agent, entities) in sorted(self.holding.items()):
			if entity in entities:
				return agent
		return None

	def location_of(self, entity: str) -> Optional[str]:
		if entity in self.at:
			return self.at[entity]
		holder = self.holder_of(entity)
		return None if (holder is None) else self.homes[holder]

	def key(self) -> tuple:
		return tuple((entity, self.location_of(entity)) for entity in self.entities)

	def applicable(self, action: Action) -> bool:
		reach = self.reach.get(action.agent, frozenset())
		return (action.source != action.destination) and (self.location_of(action.entity) == action.source) and (action.source in reach) and (action.destination in reach)

	def actions(self, agents: Iterable[str]) -> list[Action]:
		candidates = [ Action(agent, entity, self.location_of(entity), destination) for agent in agents for entity in self.entities for destination in self.locations ]
		return sorted(action for action in candidates if self.applicable(action))

	def apply(self, action: Action) -> "WorldState":
		if not self.applicable(action):
			raise PreconditionViolated("%s is not applicable: %s is at %s." % (action, action.entity, self.location_of(action.entity)))
		successor = copy.deepcopy(self)
		successor.at.pop(action.entity, None)
		for entities in successor.holding.values():
			entities.discard(action.entity)
		recipient = successor.resident_of(action.destination)
		if recipient is not None:
			successor.holding[recipient].add(action.entity)
		else:
			successor.at[action.entity] = action.destination
		return successor

	def serialize(self) -> dict:
		return {
			"at":		{ entity: self.location_of(entity) for entity in self.entities },
			"holding":	{ agent: sorted(entities) for (agent, entities) in sorted(self.holding.items()) },
		}

	def dump(self, prefix = ""):
		for entity in self.entities:
			holder = self.holder_of(entity)
			held = "" if (holder is None) else " (held by %s)" % (holder)
			print("%s%s at %s%s" % (prefix, entity, self.location_of(entity), held))

def goal_predicate(store: CDStore, goal: str, world: WorldState) -> tuple[str, str]:
	"""Reads a goal 'at(entity, location)' from a BE conceptualization."""
	if not store.is_cz(goal):
		raise MalformedGoal("Goal %s is not a conceptualization." % (goal))
	cz = store.cz(goal)
	if (cz.act != PrimitiveAct.BE) or (cz.to is None) or (cz.state is not None) or (cz.obj is not None) or (Modifier.neg in cz.mods):
		raise MalformedGoal("Goal must be a positive 'BE :to LOCATION' state, got %s." % (store.canonicalize(goal)))
	(entity, location) = (str(cz.actor), str(cz.to))
	if location not in world.locations:
		raise MalformedGoal("Unknown goal location '%s'." % (location))
	if world.location_of(entity) is None:
		raise MalformedGoal("Unknown entity '%s'." % (entity))
	return (entity, location)

def at_cz(store: CDStore, entity: str, location: str, mods: Iterable[Modifier] = ()) -> str:
	return store.assert_cz(actor = EntityRef.parse(entity), act = PrimitiveAct.BE, to = store.entity(location), mods = mods)

def goal_for(store: CDStore, request: str, world: WorldState) -> str:
	"""Maps a requested transfer to the world state it is meant to bring about."""
	cz = store.cz(request)
	if (cz.act != PrimitiveAct.PTRANS) or (not isinstance(cz.obj, EntityRef)) or (cz.to is None):
		raise MalformedGoal("Cannot derive a world goal from %s." % (store.canonicalize(request)))
	destination = world.homes.get(cz.to.name, cz.to.name) if (cz.to.param is None) else str(cz.to)
	return at_cz(store, str(cz.obj), destination)

def _first_precondition(store: CDStore, entity: str, location: str, world: WorldState, agents: list[str]) -> Optional[str]:
	instantiations = sorted(Action(agent, entity, source, location) for agent in agents for source in world.reach.get(agent, ()) if (source != location) and (location in world.reach[agent]))
	if len(instantiations) == 0:
		return None
	return at_cz(store, entity, instantiations[0].source)

def plan(goal: str, store: CDStore, world: WorldState, max_depth: int = 3, agents: Optional[Iterable[str]] = None) -> PlanResult:
	(entity, location) = goal_predicate(store, goal, world)
	agents = sorted(world.reach if (agents is None) else agents)
	frontier = collections.deque([ (world, ()) ])
	seen = set([ world.key() ])
	while len(frontier) > 0:
		(state, steps) = frontier.popleft()
		if state.location_of(entity) == location:
			_log.debug("Plan for %s: %s", store.canonicalize(goal), ", ".join(str(step) for step in steps) or "already satisfied")
			return Plan(steps = steps)
		if len(steps) >= max_depth:
			continue
		for action in state.actions(agents):
			successor = state.apply(action)
			if successor.key() in seen:
				continue
			seen.add(successor.key())
			frontier.append((successor, steps + (action, )))

	unsatisfied = _first_precondition(store, entity, location, world, agents)
	if unsatisfied is None:
		unsatisfied = goal
	_log.debug("No plan for %s, unsatisfied: %s", store.canonicalize(goal), store.canonicalize(unsatisfied))
	return Failure(unsatisfied = unsatisfied, at_depth = max_depth)

def execute(steps: Union[Plan, Iterable[Action]], world: WorldState) -> tuple[WorldState, list[Action]]:
	if isinstance(steps, Plan):
		steps = steps.steps
	events = [ ]
	for action in steps:
		world = world.apply(action)
		events.append(action)
	return (world, events)

def observe(world: WorldState, store: CDStore) -> list[str]:
	return [ at_cz(store, entity, world.location_of(entity)) for entity in world.entities ]

class PhysicalCore():
	"""Owns the shared world every agent acts on."""

	def __init__(self, world: WorldState):
		self._world = world

	@property
	def world(self) -> WorldState:
		return self._world

	def plan(self, goal: str, store: CDStore, agent: str, max_depth: int = 3) -> PlanResult:
		return plan(goal, store, self._world, max_depth = max_depth, agents = [ agent ])

	def execute(self, steps: Union[Plan, Iterable[Action]]) -> list[Action]:
		(self._world, events) = execute(steps, self._world)
		return events

	def perturb(self, entity: str, location: str):
		if location not in self._world.locations:
			raise WorldError("Cannot move %s to unknown location %s." % (entity, location))
		if self._world.location_of(entity) is None:
			raise WorldError("Cannot move unknown entity %s." % (entity))
		world = copy.deepcopy(self._world)
		world.at.pop(entity, None)
		for entities in world.holding.values():
			entities.discard(entity)
		world.at[entity] = location
		self._world = world
		_log.info("Perturbation: %s moved to %s", entity, location)
