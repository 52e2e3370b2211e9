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

import json
import logging
from dataclasses import dataclass, field
from typing import Optional, Iterator
from .Concepts import EventKind
from .Exceptions import DialogueError, NoProvenance

_log = logging.getLogger(__name__)

@dataclass
class Event():
	event_id: int
	tick: int
	agent: str
	kind: EventKind
	payload: dict
	provenance: tuple = ()
	refs: dict = field(default_factory = dict, compare = False, repr = False)

	def ref(self, name: str = "cz") -> Optional[str]:
		return self.refs.get(name)

	def serialize(self) -> dict:
		return {
			"id":			self.event_id,
			"tick":			self.tick,
			"agent":		self.agent,
			"kind":			self.kind.value,
			"payload":		self.payload,
			"provenance":	list(self.provenance),
		}

	def to_json(self) -> str:
		return json.dumps(self.serialize(), ensure_ascii = False)

	@classmethod
	def deserialize(cls, data: dict) -> "Event":
		kind = EventKind.lookup(data["kind"])
		if kind is None:
			raise DialogueError("Unknown event kind '%s'." % (data["kind"]))
		return cls(event_id = data["id"], tick = data["tick"], agent = data["agent"], kind = kind, payload = data["payload"], provenance = tuple(data["provenance"]))

	def summary(self) -> str:
		payload = self.payload
		if "mconc" in payload:
			return "%s %s: %s" % (self.kind.value, payload["mconc"], payload.get("cz"))
		if "cause" in payload:
			return "%s: %s because %s" % (self.kind.value, payload.get("effect"), payload["cause"])
		if "unsatisfied" in payload:
			return "%s: %s, unsatisfied %s" % (self.kind.value, payload["result"], payload["unsatisfied"])
		for key in ("text", "rule", "action", "state", "result", "cz"):
			if key in payload:
				text = payload[key]
				if key == "state":
					text = "%s %s" % (text, payload.get("cz", ""))
				return "%s: %s" % (self.kind.value, text)
		return self.kind.value

	def __str__(self):
		return "#%d t%d %s %s" % (self.event_id, self.tick, self.agent, self.summary())

@dataclass
class CausalChain():
	events: list

	@property
	def ids(self) -> list[int]:
		return [ event.event_id for event in self.events ]

	@property
	def origin(self) -> Event:
		return self.events[-1]

	def dump(self, prefix = ""):
		for (hop, event) in enumerate(self.events):
			print("%s%s%s" % (prefix, "  " * min(hop, 1), event))

class Trace():
	"""Append-only event log of one simulation run."""

	def __init__(self):
		self._events: list[Event] = [ ]

	@classmethod
	def from_text(cls, text: str) -> "Trace":
		trace = cls()
		for (lineno, line) in enumerate(text.splitlines(), 1):
			if line.strip() == "":
				continue
			try:
				event = Event.deserialize(json.loads(line))
			except (ValueError, KeyError, TypeError) as e:
				raise DialogueError("Trace line %d is malformed: %s" % (lineno, e)) from e
			trace._add(event)
		return trace

	@classmethod
	def from_file(cls, filename: str) -> "Trace":
		with open(filename, encoding = "utf-8") as f:
			return cls.from_text(f.read())

	def _add(self, event: Event) -> Event:
		if event.event_id != len(self._events) + 1:
			raise DialogueError("Trace event ids must be consecutive, got #%d." % (event.event_id))
		for parent in event.provenance:
			if not (1 <= parent < event.event_id):
				raise DialogueError("Event #%d cites #%d which does not precede it." % (event.event_id, parent))
		self._events.append(event)
		return event

	def append(self, tick: int, agent: str, kind: EventKind, payload: dict, provenance: tuple = (), refs: Optional[dict] = None) -> Event:
		event = Event(event_id = len(self._events) + 1, tick = tick, agent = agent, kind = kind, payload = payload, provenance = tuple(provenance), refs = dict(refs or { }))
		return self._add(event)

	@property
	def events(self) -> list[Event]:
		return list(self._events)

	def event(self, event_id: int) -> Event:
		if not (1 <= event_id <= len(self._events)):
			raise DialogueError("No event #%d in trace." % (event_id))
		return self._events[event_id - 1]

	def since(self, first_id: int) -> list[Event]:
		return self._events[first_id - 1 : ]

	def of_kind(self, kind: EventKind, agent: Optional[str] = None) -> list[Event]:
		return [ event for event in self._events if (event.kind == kind) and ((agent is None) or (event.agent == agent)) ]

	def utterances(self) -> list[str]:
		return [ event.payload["text"] for event in self.of_kind(EventKind.Utterance) ]

	def affect_onsets(self, agent: str) -> list[str]:
		return [ event.payload["state"] for event in self.of_kind(EventKind.AffectOnset, agent) ]

	def why(self, event_id: int) -> CausalChain:
		"""Follows provenance depth-first, earliest cited parent first, to a motivation."""
		def search(event: Event, path: list[Event]) -> Optional[list[Event]]:
			if event.kind == EventKind.Motivation:
				return path
			visited = set(hop.event_id for hop in path)
			for parent_id in event.provenance:
				if parent_id in visited:
					continue
				parent = self.event(parent_id)
				chain = search(parent, path + [ parent ])
				if chain is not None:
					return chain
			return None

		start = self.event(event_id)
		chain = search(start, [ start ])
		if chain is None:
			raise NoProvenance("Event #%d does not derive from any motivation." % (event_id))
		return CausalChain(events = chain)

	def serialize(self) -> str:
		return "".join(event.to_json() + "\n" for event in self._events)

	def write(self, filename: str):
		with open(filename, "w", encoding = "utf-8") as f:
			f.write(self.serialize())

	def __len__(self):
		return len(self._events)

	def __iter__(self) -> Iterator[Event]:
		return iter(self._events)
