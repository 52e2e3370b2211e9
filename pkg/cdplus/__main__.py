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
import sys
import json
import logging
import cdplus
from .CDXFormat import read_sexprs, SList
from .FriendlyArgumentParser import FriendlyArgumentParser, ArgumentError, positive_int

_log = logging.getLogger(__name__)

class ReplSession():
	"""Line-oriented debugging session over a stepping dialogue runner.

	Commands are separated by newlines or ';'. A piped script is processed
	deterministically; errors are reported and the session continues."""

	def __init__(self, runner: cdplus.DialogueRunner, cli: "CDPlusCLI"):
		self._runner = runner
		self._cli = cli
		self._parser = FriendlyArgumentParser(prog = "", add_help = False)
		self._parser.setsilenterror(True)
		commands = self._parser.add_subparsers(dest = "command")
		def command(name: str) -> FriendlyArgumentParser:
			parser = commands.add_parser(name, add_help = False)
			parser.setsilenterror(True)
			return parser
		command("step").add_argument("count", type = positive_int, nargs = "?", default = 1)
		command("run")
		command("state").add_argument("agent")
		parser = command("inject")
		parser.add_argument("agent")
		parser.add_argument("cdx", nargs = "+")
		command("trace")
		command("why").add_argument("event_id", type = positive_int)
		command("help")
		command("quit")

	def _step(self, count: int):
		for _ in range(count):
			first = len(self._runner.trace) + 1
			agent = self._runner.step()
			if agent is None:
				print("Dialogue finished at tick %d." % (self._runner.tick))
				return
			print("tick %d: %s" % (self._runner.tick, agent.name))
			self._cli.print_utterances(self._runner.trace.since(first))

	def _inject(self, agent: str, text: str):
		forms = read_sexprs(text)
		if (len(forms) != 1) or (not isinstance(forms[0], SList)):
			print("inject takes exactly one conceptualization.")
			return
		node = self._runner.inject(agent, forms[0])
		print("%s now holds %s" % (agent, self._runner.agent(agent).store.canonicalize(node)))

	def execute(self, line: str) -> bool:
		"""Runs one command; returns False when the session should end."""
		try:
			args = self._parser.parse_args(line.split())
		except ArgumentError as e:
			print("Unknown or malformed command '%s': %s" % (line, e))
			return True
		try:
			if args.command == "step":
				self._step(args.count)
			elif args.command == "run":
				while not self._runner.finished:
					self._step(1)
			elif args.command == "state":
				print(json.dumps(self._runner.agent(args.agent).serialize(), indent = 1, ensure_ascii = False))
			elif args.command == "inject":
				self._inject(args.agent, " ".join(args.cdx))
			elif args.command == "trace":
				sys.stdout.write(self._runner.trace.serialize())
			elif args.command == "why":
				self._runner.trace.why(args.event_id).dump()
			elif args.command == "help":
				print("Commands: step [n], run, state <agent>, inject <agent> <cz>, trace, why <id>, quit")
			elif args.command == "quit":
				return False
		except cdplus.CDPlusError as e:
			print("[%s] %s" % (e.__class__.__name__, e))
		return True

	def run(self, stream) -> int:
		interactive = stream.isatty()
		while True:
			if interactive:
				print("cdplus> ", end = "", flush = True)
			line = stream.readline()
			if line == "":
				break
			for command in line.split(";"):
				if (command.strip() != "") and (not self.execute(command.strip())):
					return 0
		return 0

class CDPlusCLI():
	_STYLES = {
		"speaker":	"\x1b[1m",
		"ok":		"\x1b[32m",
		"fail":		"\x1b[31m",
	}

	def __init__(self, args):
		self._args = args
		self._color = ("CDPLUS_NO_COLOR" not in os.environ) and sys.stdout.isatty()

	def _style(self, text: str, style: str) -> str:
		if not self._color:
			return text
		return "%s%s\x1b[0m" % (self._STYLES[style], text)

	def print_utterances(self, events: list):
		for event in events:
			if event.kind == cdplus.EventKind.Utterance:
				print("%s: %s" % (self._style(event.agent, "speaker"), event.payload["text"]))

	def cmd_run(self) -> int:
		scenario = cdplus.Scenario.from_file(self._args.scenario)
		trace = cdplus.run(scenario)
		self.print_utterances(trace.events)
		if self._args.trace is not None:
			trace.write(self._args.trace)
			_log.info("Wrote %d trace events to %s", len(trace), self._args.trace)
		if self._args.golden is not None:
			with open(self._args.golden, encoding = "utf-8") as f:
				golden = f.read()
			if golden != trace.serialize():
				print(self._style("Trace differs from golden file %s." % (self._args.golden), "fail"))
				return 1
			print(self._style("Trace matches golden file %s." % (self._args.golden), "ok"))
		return 0

	def cmd_validate(self) -> int:
		doc = cdplus.parse_file(self._args.filename, strict = False)
		if len(doc.sections("rule")) > 0:
			cdplus.Rulebase.from_document(doc)
		if len(doc.sections("template")) > 0:
			cdplus.TemplateSet.from_document(doc)
		if len(doc.sections("scenario")) > 0:
			cdplus.Scenario.from_document(doc, base_dir = os.path.dirname(os.path.abspath(self._args.filename)))
		diagnostics = cdplus.validate(doc)
		for diagnostic in diagnostics:
			print("%s:%s" % (self._args.filename, diagnostic))
		if (self._args.verbose >= 1) and (len(diagnostics) == 0):
			print("%s: %d items, no problems." % (self._args.filename, len(doc.items)))
		return 0 if (len(diagnostics) == 0) else 1

	def cmd_explain(self) -> int:
		trace = cdplus.Trace.from_file(self._args.trace)
		chain = cdplus.why(trace, self._args.event_id)
		chain.dump()
		return 0

	def cmd_repl(self) -> int:
		runner = cdplus.DialogueRunner(cdplus.Scenario.from_file(self._args.scenario))
		return ReplSession(runner, self).run(sys.stdin)

	def run(self) -> int:
		handler = getattr(self, "cmd_" + self._args.command)
		return handler()

def _parser() -> FriendlyArgumentParser:
	parser = FriendlyArgumentParser(prog = "cdplus", description = "Run, check and explain CD+ dialogue scenarios.")
	parser.add_argument("-v", "--verbose", action = "count", default = 0, help = "Increases verbosity. Can be specified multiple times to increase.")
	commands = parser.add_subparsers(dest = "command", required = True)

	command = commands.add_parser("run", help = "Simulate a scenario until it is quiescent.")
	command.add_argument("--trace", metavar = "filename", help = "Write the event trace to this file, one JSON object per line.")
	command.add_argument("--golden", metavar = "filename", help = "Compare the trace byte for byte against this golden file; exit 1 on mismatch.")
	command.add_argument("scenario", help = "Scenario .cdx file")

	command = commands.add_parser("validate", help = "Parse a .cdx file and report ungrounded symbols and other problems.")
	command.add_argument("filename", help = ".cdx file to check")

	command = commands.add_parser("explain", help = "Print the causal chain behind one trace event.")
	command.add_argument("trace", help = "Trace file written by 'run --trace'")
	command.add_argument("event_id", type = positive_int, help = "Id of the event to explain")

	command = commands.add_parser("repl", help = "Step a scenario interactively or from a piped script.")
	command.add_argument("scenario", help = "Scenario .cdx file")
	return parser

def main(argv = None) -> int:
	args = _parser().parse_args(sys.argv[1:] if (argv is None) else argv)
	level = { 0: logging.WARNING, 1: logging.INFO }.get(args.verbose, logging.DEBUG)
	logging.basicConfig(level = level, format = "%(levelname)s %(name)s: %(message)s")
	try:
		return CDPlusCLI(args).run()
	except cdplus.CDPlusError as e:
		print("[%s] %s" % (e.__class__.__name__, e), file = sys.stderr)
		return 2
	except OSError as e:
		print("[%s] %s" % (e.__class__.__name__, e), file = sys.stderr)
		return 2

if __name__ == "__main__":
	sys.exit(main())
