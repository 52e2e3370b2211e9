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

import os
import logging
from dataclasses import dataclass, field
from typing import Optional
from .CDGraph import CDStore
from .CDXFormat import CdxDocument, SAtom, SList, parse, parse_file, build_node
from .Concepts import EventKind
from .Agent import Agent, Message
from .Rules import Rulebase
from .Surface import TemplateSet
from .Trace import Trace, CausalChain
from .World import WorldState, PhysicalCore, observe
from .Exceptions import CDPlusError, DialogueError, ScenarioInvalid

_log = logging.getLogger(__name__)

@dataclass(frozen=True)
class Perturbation():
	"""Moves an entity behind every agent's back before the given tick's step."""
	tick: int
	entity: str
	location: str

@dataclass
class Scenario():
	name: str
	world: WorldState
	agent_sections: dict
	turns: tuple
	max_ticks: int
	rulebase: Rulebase
	templates: TemplateSet
	perturbations: list = field(default_factory = list)

	@classmethod
	def from_document(cls, doc: CdxDocument, base_dir: Optional[str] = None) -> "Scenario":
		def fail(message: str, node = None):
			if node is not None:
				message = "%d:%d: %s" % (node.line, node.col, message)
			raise ScenarioInvalid(message)

		headers = doc.sections("scenario")
		if len(headers) != 1:
			fail("Expected exactly one scenario section, found %d." % (len(headers)))
		header = headers[0]
		(positional, keywords) = header.split()
		name = str(positional[0].value) if ((len(positional) > 0) and isinstance(positional[0], SAtom)) else "unnamed"

		max_ticks = keywords.get(":max-ticks", SAtom(value = 20, kind = "int"))
		if (max_ticks.kind != "int") or (max_ticks.value < 0):
			fail(":max-ticks must be a non-negative integer.", header)
		if (":turns" not in keywords) or (not isinstance(keywords[":turns"], SList)):
			fail("Scenario needs a :turns list.", header)
		turns = tuple(str(atom.value) for atom in keywords[":turns"].items)
		if (len(turns) != 2) or (len(set(turns)) != 2):
			fail("Turn order must name two distinct agents, got %s." % (keywords[":turns"].flat()), header)

		def resolve(keyword: str) -> Optional[str]:
			if keyword not in keywords:
				return None
			path = str(keywords[keyword].value)
			if (base_dir is not None) and (not os.path.isabs(path)):
				path = os.path.join(base_dir, path)
			return path

		try:
			rules_file = resolve(":rules")
			rulebase = Rulebase.default() if (rules_file is None) else Rulebase.from_file(rules_file)
			templates_file = resolve(":templates")
			templates = TemplateSet.default() if (templates_file is None) else TemplateSet.from_file(templates_file)
		except OSError as e:
			raise ScenarioInvalid("Cannot read referenced file: %s" % (e)) from e
		except CDPlusError as e:
			raise ScenarioInvalid("[%s] %s" % (e.__class__.__name__, e)) from e

		worlds = doc.sections("world")
		if len(worlds) != 1:
			fail("Expected exactly one world section, found %d." % (len(worlds)))
		try:
			world = WorldState.from_sexpr(worlds[0])
		except CDPlusError as e:
			raise ScenarioInvalid("[%s] %s" % (e.__class__.__name__, e)) from e

		agent_sections = { }
		for section in doc.sections("agent"):
			agent_name = str(section.items[1].value) if ((len(section.items) > 1) and isinstance(section.items[1], SAtom)) else None
			if (agent_name is None) or (agent_name in agent_sections):
				fail("Agent sections need distinct names.", section)
			agent_sections[agent_name] = section
		if set(agent_sections) != set(turns):
			fail("Agents %s do not match turn order %s." % (", ".join(sorted(agent_sections)), ", ".join(turns)))

		perturbations = [ ]
		for section in doc.sections("perturb"):
			(_, args) = section.split()
			try:
				perturbation = Perturbation(tick = args[":tick"].value, entity = str(args[":move"].value), location = str(args[":to"].value))
			except KeyError:
				fail("perturb needs :tick, :move and :to.", section)
			if (not isinstance(perturbation.tick, int)) or (perturbation.tick < 1):
				fail("perturb :tick must be a positive integer.", section)
			if world.location_of(perturbation.entity) is None:
				fail("perturb moves unknown entity %s." % (perturbation.entity), section)
			if perturbation.location not in world.locations:
				fail("perturb targets unknown location %s." % (perturbation.location), section)
			perturbations.append(perturbation)

		scenario = cls(name = name, world = world, agent_sections = agent_sections, turns = turns, max_ticks = max_ticks.value, rulebase = rulebase, templates = templates, perturbations = sorted(perturbations, key = lambda p: p.tick))
		# Agents are only built per run; building them once here surfaces their errors early
		scenario.build_agents()
		return scenario

	@classmethod
	def from_text(cls, text: str, base_dir: Optional[str] = None) -> "Scenario":
		try:
			doc = parse(text)
		except CDPlusError as e:
			raise ScenarioInvalid("[%s] %s" % (e.__class__.__name__, e)) from e
		return cls.from_document(doc, base_dir = base_dir)

	@classmethod
	def from_file(cls, filename: str) -> "Scenario":
		try:
			doc = parse_file(filename)
		except OSError as e:
			raise ScenarioInvalid("Cannot read scenario %s: %s" % (filename, e)) from e
		except CDPlusError as e:
			raise ScenarioInvalid("%s: [%s] %s" % (filename, e.__class__.__name__, e)) from e
		return cls.from_document(doc, base_dir = os.path.dirname(os.path.abspath(filename)))

	def build_agents(self) -> list[Agent]:
		agents = [ ]
		for name in self.turns:
			try:
				agents.append(Agent.from_sexpr(self.agent_sections[name], self.rulebase, self.templates))
			except CDPlusError as e:
				raise ScenarioInvalid("[%s] %s" % (e.__class__.__name__, e)) from e
		return agents

class DialogueRunner():
	"""Steps the agents of a scenario in turn order over one shared world and trace."""

	def __init__(self, scenario: Scenario):
		self._scenario = scenario
		self._trace = Trace()
		self._core = PhysicalCore(scenario.world)
		self._agents = { agent.name: agent for agent in scenario.build_agents() }
		for agent in self._agents.values():
			agent.attach(self._trace, self._core)
		self._inboxes = { name: [ ] for name in scenario.turns }
		self._tick = 0
		self._idle_steps = 0
		self._finished = (scenario.max_ticks == 0)

	@property
	def scenario(self) -> Scenario:
		return self._scenario

	@property
	def trace(self) -> Trace:
		return self._trace

	@property
	def core(self) -> PhysicalCore:
		return self._core

	@property
	def tick(self) -> int:
		return self._tick

	@property
	def finished(self) -> bool:
		return self._finished

	def agent(self, name: str) -> Agent:
		if name not in self._agents:
			raise DialogueError("No agent named '%s'; known are %s." % (name, ", ".join(self._scenario.turns)))
		return self._agents[name]

	def _perturb(self):
		for perturbation in self._scenario.perturbations:
			if perturbation.tick == self._tick:
				self._core.perturb(perturbation.entity, perturbation.location)
				self._trace.append(self._tick, "world", EventKind.Perturbation, { "entity": perturbation.entity, "to": perturbation.location })

	def _percepts(self) -> list[str]:
		scratch = CDStore()
		return [ scratch.canonicalize(node) for node in observe(self._core.world, scratch) ]

	def step(self) -> Optional[Agent]:
		"""Advances one tick; returns the agent that acted or None once finished."""
		if self._finished:
			return None
		self._tick += 1
		self._perturb()
		turns = self._scenario.turns
		agent = self._agents[turns[(self._tick - 1) % len(turns)]]
		inbox = self._inboxes[agent.name]
		self._inboxes[agent.name] = [ ]
		for message in agent.step(inbox, self._percepts(), self._tick).outbox:
			self.deliver(message)

		self._idle_steps = 0 if agent.active else (self._idle_steps + 1)
		if self._idle_steps >= len(turns):
			_log.info("Dialogue quiescent after tick %d.", self._tick)
			self._finished = True
		elif self._tick >= self._scenario.max_ticks:
			_log.info("Dialogue stopped at max tick %d.", self._tick)
			self._finished = True
		return agent

	def deliver(self, message: Message):
		if message.addressee not in self._inboxes:
			_log.warning("Message to unknown agent %s dropped: %s", message.addressee, message.text)
			return
		self._inboxes[message.addressee].append(message)

	def inject(self, agent_name: str, form: SList) -> str:
		"""Asserts a conceptualization into an agent's memory from outside the simulation."""
		agent = self.agent(agent_name)
		node = build_node(agent.store, form)
		self._trace.append(self._tick, agent.name, EventKind.Assertion, { "cz": agent.store.canonicalize(node), "injected": True }, refs = { "cz": node })
		return node

	def run(self) -> Trace:
		while self.step() is not None:
			pass
		return self._trace

def run(scenario: Scenario) -> Trace:
	return DialogueRunner(scenario).run()

def why(trace: Trace, event_id: int) -> CausalChain:
	return trace.why(event_id)
