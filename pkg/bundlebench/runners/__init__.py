"""Command runners: each builds a ReportDocument for one subcommand."""
