# pdf_generator.py
# ============================================================================
# PDF Generator for measure reports
# ============================================================================

import sys
from datetime import datetime
from xml.sax.saxutils import escape

from reportlab.lib.colors import black, lightgrey
from reportlab.lib.enums import TA_CENTER, TA_LEFT
from reportlab.lib.pagesizes import A4
from reportlab.lib.styles import ParagraphStyle, getSampleStyleSheet
from reportlab.platypus import Paragraph, SimpleDocTemplate, Spacer, Table, TableStyle

from config import APP_TITLE, APP_VERSION, TABLE_DECIMALS


def create_report_styles():
    """Paragraph styles for the synergy report"""
    styles = getSampleStyleSheet()

    styles.add(ParagraphStyle(
        name='DocumentTitle',
        parent=styles['Title'],
        fontSize=20,
        spaceAfter=24,
        spaceBefore=16,
        alignment=TA_CENTER,
        textColor=black,
        fontName='Helvetica-Bold',
        borderWidth=2,
        borderColor=black,
        borderPadding=12,
        backColor='#F8F9FA'
    ))

    # One per report
    styles.add(ParagraphStyle(
        name='SectionHeader',
        parent=styles['Heading2'],
        fontSize=14,
        spaceAfter=8,
        spaceBefore=12,
        textColor=black,
        fontName='Helvetica-Bold'
    ))

    styles.add(ParagraphStyle(
        name='ReportBody',
        parent=styles['Normal'],
        fontSize=10,
        spaceAfter=4,
        alignment=TA_LEFT,
        fontName='Helvetica',
        leading=13
    ))

    styles.add(ParagraphStyle(
        name='GenerationInfo',
        parent=styles['Normal'],
        fontSize=10,
        spaceAfter=20,
        spaceBefore=12,
        alignment=TA_CENTER,
        fontName='Helvetica',
        textColor=black
    ))

    return styles


def _value_table(report):
    """Quantity/value grid for one report"""
    number = f"{{:.{TABLE_DECIMALS}f}}".format
    rows = [["Quantity", "Value (bits)"], ["I(X:Y)", number(report.i_whole)]]
    rows += [[f"I(X{i + 1}:Y)", number(v)] for i, v in enumerate(report.i_singletons)]
    rows += [
        ["S_max", number(report.s_max)],
        ["WMS", number(report.wms)],
        ["delta I", number(report.delta_i)],
        ["I_VK upper bound", number(report.i_vk_upper)],
        ["I_VK best", number(report.i_vk_best)],
        ["S_VK interval", f"[{number(report.s_vk.lower)}, {number(report.s_vk.upper)}]"],
        ["S_VK best", number(report.s_vk.best)],
    ]
    if report.pid2 is not None:
        rows += [
            ["redundancy {1,2}", number(report.pid2.redundancy)],
            ["unique {1}", number(report.pid2.unique1)],
            ["unique {2}", number(report.pid2.unique2)],
            ["synergy {12}", number(report.pid2.synergy)],
        ]

    table = Table(rows, hAlign='LEFT')
    table.setStyle(TableStyle([
        ('FONTNAME', (0, 0), (-1, 0), 'Helvetica-Bold'),
        ('BACKGROUND', (0, 0), (-1, 0), lightgrey),
        ('GRID', (0, 0), (-1, -1), 0.5, black),
        ('FONTSIZE', (0, 0), (-1, -1), 9),
    ]))
    return table


def build_story(reports, styles, title):
    story = [Paragraph(title, styles['DocumentTitle'])]
    generated = datetime.now().strftime("%Y-%m-%d %H:%M")
    story.append(Paragraph(f"Generated by {APP_TITLE} v{APP_VERSION} on {generated}", styles['GenerationInfo']))

    for report in reports:
        story.append(Paragraph(escape(report.source), styles['SectionHeader']))
        sizes = " x ".join(str(size) for size in report.alphabet_sizes)
        story.append(Paragraph(
            f"{report.n} predictors, alphabet sizes {sizes}; optimizer restarts={report.restarts}, "
            f"seed={report.seed}, converged={report.converged}", styles['ReportBody']))
        story.append(Spacer(1, 6))
        story.append(_value_table(report))
        story.append(Spacer(1, 12))
    return story


def reports_to_pdf(reports, output_filename, title="Synergy Report", verbose=False):
    """Write one section per report; returns the usual result dict"""
    try:
        if verbose:
            print(f"📄 Creating PDF with {len(reports)} report(s)...", file=sys.stderr)

        doc = SimpleDocTemplate(
            output_filename,
            pagesize=A4,
            rightMargin=72,
            leftMargin=72,
            topMargin=72,
            bottomMargin=72
        )
        doc.build(build_story(reports, create_report_styles(), title))

        return {
            'success': True,
            'file_path': output_filename,
            'cancelled': False,
            'message': f'PDF created successfully: {output_filename}'
        }
    except Exception as e:
        return {
            'success': False,
            'file_path': output_filename,
            'cancelled': False,
            'message': f'Failed to create PDF file: {e}'
        }


def generate_default_filename(prefix="Synergy_report"):
    current_time = datetime.now().strftime("%Y%m%d_%H%M%S")
    return f"{prefix}_{current_time}.pdf"
