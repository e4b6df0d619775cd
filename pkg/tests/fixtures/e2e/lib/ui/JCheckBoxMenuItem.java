package ui;

public class JCheckBoxMenuItem extends JMenuItem { }
