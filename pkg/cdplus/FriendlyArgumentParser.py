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

import sys
import argparse
import textwrap

class ArgumentError(Exception): pass

class FriendlyArgumentParser(argparse.ArgumentParser):
	"""Prints wrapped errors plus help and exits with status 2, or raises
	ArgumentError when silenced (used for REPL command lines)."""

	def __init__(self, *args, **kwargs):
		argparse.ArgumentParser.__init__(self, *args, **kwargs)
		self.__silent_error = False

	def setsilenterror(self, silenterror: bool):
		self.__silent_error = silenterror

	def exit(self, status = 0, message = None):
		if self.__silent_error:
			raise ArgumentError(message or "")
		argparse.ArgumentParser.exit(self, status, message)

	def error(self, msg):
		if self.__silent_error:
			raise ArgumentError(msg)
		for line in textwrap.wrap("Error: %s" % (msg), subsequent_indent = "  "):
			print(line, file = sys.stderr)
		print(file = sys.stderr)
		self.print_help(file = sys.stderr)
		sys.exit(2)

def positive_int(value: str) -> int:
	number = int(value, 10)
	if number < 1:
		raise argparse.ArgumentTypeError("%s is not a positive integer" % (value))
	return number
