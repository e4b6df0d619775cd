package ui;

public class JRadioButtonMenuItem extends JMenuItem { }
