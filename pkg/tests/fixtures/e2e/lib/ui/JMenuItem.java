package ui;

public class JMenuItem extends AbstractButton { }
